#include <fstream>
#include <optional>

#include "asymloss/cli/inputs.hpp"
#include "parse_util.hpp"

namespace asymloss::cli {

std::vector<double> read_errors_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!detail::trim(line).empty()) {
      header = detail::split(line, ',');
      break;
    }
  }
  if (header.empty()) throw InputError("CSV input is empty; a header row is required");

  std::optional<std::size_t> error_col, y_col, yhat_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "error") error_col = i;
    else if (header[i] == "y") y_col = i;
    else if (header[i] == "yhat") yhat_col = i;
  }
  if (!error_col && !(y_col && yhat_col)) {
    throw InputError("CSV header must name an 'error' column or both 'y' and 'yhat'");
  }

  std::vector<double> errors;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != header.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    const auto field = [&](std::size_t col) {
      double v = 0.0;
      if (!detail::try_parse_number(fields[col], v)) {
        throw InputError("line " + std::to_string(line_no) + ": non-numeric field '" +
                         fields[col] + "' in column '" + header[col] + "'");
      }
      return v;
    };
    errors.push_back(error_col ? field(*error_col) : field(*yhat_col) - field(*y_col));
  }
  return errors;
}

std::vector<double> read_errors_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return read_errors_csv(in);
}

}  // namespace asymloss::cli
