#include "kppca/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "kppca/errors.hpp"

namespace kppca {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

std::vector<std::string> numbered_header(const std::string& prefix, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Eigen::MatrixXd load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool seen_first = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    const auto fields = split(content);

    std::vector<double> values;
    values.reserve(fields.size());
    std::optional<std::size_t> bad_column;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto value = parse_number(fields[c]);
      if (!value) {
        bad_column = c;
        break;
      }
      values.push_back(*value);
    }
    if (bad_column) {
      if (!seen_first) {  // header row
        seen_first = true;
        width = fields.size();
        continue;
      }
      std::ostringstream msg;
      msg << path.string() << ": row " << line_no << ", column " << (*bad_column + 1)
          << ": cannot parse '" << fields[*bad_column] << "'";
      throw Error(Errc::ParseError, msg.str());
    }
    if (width == 0) width = values.size();
    if (values.size() != width) {
      std::ostringstream msg;
      msg << path.string() << ": row " << line_no << " has " << values.size()
          << " fields, expected " << width;
      throw Error(Errc::RaggedRows, msg.str());
    }
    seen_first = true;
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(Errc::ParseError, path.string() + ": no numeric rows");

  Eigen::MatrixXd out(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < width; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
    }
  }
  return out;
}

void save_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
              const Eigen::MatrixXd& samples) {
  if (!header.empty() && samples.cols() > 0 &&
      static_cast<Eigen::Index>(header.size()) != samples.rows()) {
    throw Error(Errc::DimensionMismatch, "CSV header does not match the sample dimension");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  if (!header.empty()) out << '\n';
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
      out << (i ? "," : "") << format_double(samples(i, j));
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

}  // namespace kppca
