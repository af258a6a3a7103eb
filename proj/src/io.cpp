#include "galinv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace galinv::io {

namespace {

double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("bad number '" + std::string(text) + "' in " + context);
  }
  return v;
}

std::string join_doubles(const double* v, std::size_t n) {
  std::string out = "[";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  out += "]";
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  return join_doubles(v.data(), v.size());
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CurveSamples read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x1,x2,x3") {
    throw ParseError(path + ": expected header 't,x1,x2,x3', got '" + line +
                     "'");
  }
  std::vector<double> ts;
  std::vector<Vec3> xs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double vals[4];
    std::size_t start = 0;
    for (int k = 0; k < 4; ++k) {
      const std::size_t comma = line.find(',', start);
      const bool last = (k == 3);
      if (last != (comma == std::string::npos)) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected 4 comma-separated values");
      }
      const std::size_t end = last ? line.size() : comma;
      vals[k] = parse_double({line.data() + start, end - start},
                             path + ":" + std::to_string(lineno));
      start = end + 1;
    }
    ts.push_back(vals[0]);
    xs.emplace_back(vals[1], vals[2], vals[3]);
  }
  const std::size_t n = ts.size();
  if (n < static_cast<std::size_t>(kMinSamples)) {
    throw ParseError(path + ": need at least " + std::to_string(kMinSamples) +
                     " rows, got " + std::to_string(n));
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(ts[i] > ts[i - 1])) {
      throw ParseError(path + ": rows not sorted by t at row " +
                       std::to_string(i + 2));
    }
  }
  const double dt = (ts[n - 1] - ts[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(ts[i + 1] - ts[i] - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw ParseError(path + ": non-uniform spacing at row " +
                       std::to_string(i + 2) + " (got " +
                       format_double(ts[i + 1] - ts[i]) + ", expected " +
                       format_double(dt) + ")");
    }
  }
  return CurveSamples(ts[0], dt, std::move(xs));
}

void write_curve_csv(const std::string& path, const CurveSamples& s) {
  std::ostringstream out;
  out << "t,x1,x2,x3\n";
  for (int i = 0; i < s.size(); ++i) {
    const Vec3& x = s.positions()[static_cast<std::size_t>(i)];
    out << format_double(s.param(i)) << ',' << format_double(x[0]) << ','
        << format_double(x[1]) << ',' << format_double(x[2]) << '\n';
  }
  write_text_file(path, out.str());
}

std::string to_json(const GalileanElement& g) {
  double r[9];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r[3 * i + j] = g.rotation()(i, j);
  }
  std::ostringstream out;
  out << "{\n";
  out << "  \"r\": " << join_doubles(r, 9) << ",\n";
  out << "  \"s\": " << format_double(g.time_shift()) << ",\n";
  out << "  \"v\": " << join_doubles(g.boost().data(), 3) << ",\n";
  out << "  \"y\": " << join_doubles(g.translation().data(), 3) << "\n";
  out << "}\n";
  return out.str();
}

std::string to_json(const Signature& sig) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"meta\": {\n";
  out << "    \"dt\": " << format_double(sig.meta.dt) << ",\n";
  out << "    \"method\": " << quote(sig.meta.method) << ",\n";
  out << "    \"source\": " << quote(sig.meta.source) << "\n";
  out << "  },\n";
  out << "  \"s\": " << join_doubles(sig.s) << ",\n";
  out << "  \"w1\": " << join_doubles(sig.w1) << ",\n";
  out << "  \"w2\": " << join_doubles(sig.w2) << ",\n";
  out << "  \"w3\": " << join_doubles(sig.w3) << "\n";
  out << "}\n";
  return out.str();
}

std::string to_json(const EquivalenceReport& rep) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"equivalent\": " << (rep.equivalent ? "true" : "false") << ",\n";
  out << "  \"max_dev_w1\": " << format_double(rep.max_dev_w1) << ",\n";
  out << "  \"max_dev_w2\": " << format_double(rep.max_dev_w2) << ",\n";
  out << "  \"max_dev_w3\": " << format_double(rep.max_dev_w3) << ",\n";
  out << "  \"overlap\": {\n";
  out << "    \"hi\": " << format_double(rep.overlap_hi) << ",\n";
  out << "    \"lo\": " << format_double(rep.overlap_lo) << "\n";
  out << "  }\n";
  out << "}\n";
  return out.str();
}

std::string to_json(const RecoveryReport& rep) {
  std::ostringstream out;
  std::string g = to_json(rep.g);
  // indent the nested object by two spaces
  std::string indented;
  for (std::size_t i = 0; i < g.size(); ++i) {
    indented += g[i];
    if (g[i] == '\n' && i + 1 < g.size()) indented += "  ";
  }
  if (!indented.empty() && indented.back() == '\n') indented.pop_back();
  out << "{\n";
  out << "  \"g\": " << indented << ",\n";
  out << "  \"orth_defect\": " << format_double(rep.orth_defect) << ",\n";
  out << "  \"residual\": " << format_double(rep.residual) << "\n";
  out << "}\n";
  return out.str();
}

std::string pullback_json(double at, const AlgebraElement& a) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"at\": " << format_double(at) << ",\n";
  out << "  \"matrix\": [\n";
  for (int r = 0; r < 5; ++r) {
    double row[5];
    for (int c = 0; c < 5; ++c) row[c] = a.m(r, c);
    out << "    " << join_doubles(row, 5) << (r < 4 ? ",\n" : "\n");
  }
  out << "  ],\n";
  out << "  \"skew_defect\": " << format_double(a.skew_defect()) << "\n";
  out << "}\n";
  return out.str();
}

std::string reconstruction_sidecar_json(const ConstantInvariants& inv,
                                        double h,
                                        const ReconstructionResult& rec) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"h\": " << format_double(h) << ",\n";
  out << "  \"kappa\": " << format_double(invariant_kappa(inv)) << ",\n";
  out << "  \"max_orth_defect\": " << format_double(rec.max_orth_defect)
      << ",\n";
  out << "  \"reorthonormalizations\": " << rec.reorthonormalizations << ",\n";
  out << "  \"tau\": " << format_double(invariant_tau(inv)) << ",\n";
  out << "  \"w1\": " << format_double(inv.w1) << ",\n";
  out << "  \"w2\": " << format_double(inv.w2) << "\n";
  out << "}\n";
  return out.str();
}

GalileanElement element_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad element JSON: ") + e.what());
  }
  try {
    const auto r = j.at("r").get<std::vector<double>>();
    const auto v = j.at("v").get<std::vector<double>>();
    const auto y = j.at("y").get<std::vector<double>>();
    const double s = j.at("s").get<double>();
    if (r.size() != 9 || v.size() != 3 || y.size() != 3) {
      throw ParseError("element JSON has wrong array sizes");
    }
    Mat3 rm;
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) rm(i, k) = r[static_cast<std::size_t>(3 * i + k)];
    }
    return {rm, Vec3(v[0], v[1], v[2]), Vec3(y[0], y[1], y[2]), s};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad element JSON: ") + e.what());
  }
}

GalileanElement element_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return element_from_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

void write_signature_plot_csv(const std::string& path, const Signature& sig) {
  std::ostringstream out;
  out << "s,w1,w2,w3\n";
  for (std::size_t i = 0; i < sig.s.size(); ++i) {
    out << format_double(sig.s[i]) << ',' << format_double(sig.w1[i]) << ','
        << format_double(sig.w2[i]) << ',' << format_double(sig.w3[i]) << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace galinv::io
