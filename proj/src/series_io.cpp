#include "bdlab/series_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "bdlab/error.hpp"

namespace bdlab {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const CoeffSeq& f, std::ostream& out) {
  if (f.tail() != 0.0) throw InvalidInput("CSV export cannot carry a nonzero tail constant");
  out << "index,value\n";
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) out << i << ',' << format_double(c[i]) << '\n';
  if (!out) throw IoError("failed writing coefficient CSV");
}

CoeffSeq read_csv(std::istream& in, Space space) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("index,value", 0) != 0) {
    throw IoError("coefficient CSV must start with the header 'index,value'");
  }
  std::vector<double> coeffs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed CSV row at line " + std::to_string(lineno));
    std::size_t index = 0;
    double value = 0.0;
    const char* b = line.data();
    const char* e = line.data() + line.size();
    if (!line.empty() && line.back() == '\r') --e;
    auto r1 = std::from_chars(b, b + comma, index);
    auto r2 = std::from_chars(b + comma + 1, e, value);
    if (r1.ec != std::errc() || r2.ec != std::errc() || r2.ptr != e) {
      throw IoError("malformed CSV row at line " + std::to_string(lineno));
    }
    if (index != coeffs.size()) throw IoError("CSV indices must be consecutive from 0");
    coeffs.push_back(value);
  }
  return CoeffSeq(std::move(coeffs), space);
}

nlohmann::json to_json(const CoeffSeq& f) {
  return {{"space", to_string(f.space())},
          {"n", f.size()},
          {"coeffs", std::vector<double>(f.coeffs().begin(), f.coeffs().end())},
          {"tail", f.tail()}};
}

CoeffSeq coeffseq_from_json(const nlohmann::json& j) {
  try {
    auto coeffs = j.at("coeffs").get<std::vector<double>>();
    if (j.contains("n") && j.at("n").get<std::size_t>() != coeffs.size()) {
      throw IoError("JSON field 'n' disagrees with the coefficient count");
    }
    return CoeffSeq(std::move(coeffs), space_from_string(j.at("space").get<std::string>()),
                    j.value("tail", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed coefficient JSON: ") + e.what());
  }
}

}  // namespace bdlab
