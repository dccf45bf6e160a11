#include "funtf/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace funtf {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(Err::FileFormat, "malformed JSON");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Err::FileFormat, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) raise(Err::FileFormat, "cannot write " + path);
  out << text;
}

}  // namespace

Frame frame_from_json_string(const std::string& text) {
  const json j = parse(text);
  try {
    const std::string field_s = j.at("field").get<std::string>();
    if (field_s != "real" && field_s != "complex")
      raise(Err::FileFormat, "frame JSON: field must be 'real' or 'complex'");
    const FieldTag field = field_s == "real" ? FieldTag::Real : FieldTag::Complex;
    const int d = j.at("d").get<int>();
    const int n = j.at("N").get<int>();
    const auto& cols = j.at("columns");
    if (d <= 0 || n <= 0 || int(cols.size()) != n)
      raise(Err::FileFormat, "frame JSON: inconsistent dimensions");
    Mat m(d, n);
    for (int c = 0; c < n; ++c) {
      if (int(cols[c].size()) != d) raise(Err::FileFormat, "frame JSON: bad column length");
      for (int r = 0; r < d; ++r) {
        const auto& e = cols[c][r];
        if (int(e.size()) != 2) raise(Err::FileFormat, "frame JSON: entry must be [re, im]");
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      }
    }
    return Frame(m, field);
  } catch (const json::exception& e) {
    raise(Err::FileFormat, std::string("frame JSON: ") + e.what());
  }
}

std::string frame_to_json_string(const Frame& f) {
  json cols = json::array();
  for (int c = 0; c < f.N(); ++c) {
    json col = json::array();
    for (int r = 0; r < f.d(); ++r) {
      const Complex z = f.matrix()(r, c);
      col.push_back({z.real(), f.field() == FieldTag::Real ? 0.0 : z.imag()});
    }
    cols.push_back(std::move(col));
  }
  json j{{"field", field_name(f.field())}, {"d", f.d()}, {"N", f.N()}, {"columns", cols}};
  return j.dump(2);
}

Frame load_frame(const std::string& path) { return frame_from_json_string(slurp(path)); }
void save_frame(const Frame& f, const std::string& path) { spit(path, frame_to_json_string(f)); }

EigenstepsTable table_from_json_string(const std::string& text) {
  const json j = parse(text);
  try {
    const int n = j.at("N").get<int>();
    const int d = j.at("d").get<int>();
    const auto& rows = j.at("rows");
    if (n <= 0 || d <= 0 || int(rows.size()) != n + 1)
      raise(Err::FileFormat, "eigensteps JSON: need N+1 rows");
    EigenstepsTable t(n, d);
    for (int r = 0; r <= n; ++r) {
      if (int(rows[r].size()) != d) raise(Err::FileFormat, "eigensteps JSON: bad row length");
      for (int c = 0; c < d; ++c) t.values(r, c) = rows[r][c].get<double>();
    }
    return t;
  } catch (const json::exception& e) {
    raise(Err::FileFormat, std::string("eigensteps JSON: ") + e.what());
  }
}

std::string table_to_json_string(const EigenstepsTable& t) {
  json rows = json::array();
  for (int r = 0; r <= t.N; ++r) {
    json row = json::array();
    for (int c = 0; c < t.d; ++c) row.push_back(t.values(r, c));
    rows.push_back(std::move(row));
  }
  json j{{"N", t.N}, {"d", t.d}, {"rows", rows}};
  return j.dump(2);
}

EigenstepsTable load_table(const std::string& path) { return table_from_json_string(slurp(path)); }
void save_table(const EigenstepsTable& t, const std::string& path) {
  spit(path, table_to_json_string(t));
}

std::string table_to_csv(const EigenstepsTable& t) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (int r = 0; r <= t.N; ++r) {
    for (int c = 0; c < t.d; ++c) out << (c ? "," : "") << t.values(r, c);
    out << "\n";
  }
  return out.str();
}

std::string path_to_csv(const FramePath& p) {
  if (p.samples.empty()) raise(Err::Internal, "path_to_csv: empty path");
  const Frame& f0 = p.samples.front().frame;
  const bool complex_field = f0.field() == FieldTag::Complex;
  std::ostringstream out;
  out << std::setprecision(17);
  out << "t,funtf_residual,od_margin";
  for (int n = 0; n < f0.N(); ++n)
    for (int i = 0; i < f0.d(); ++i) {
      if (complex_field)
        out << ",f" << n << "_" << i << "_re,f" << n << "_" << i << "_im";
      else
        out << ",f" << n << "_" << i;
    }
  out << "\n";
  for (const auto& s : p.samples) {
    out << s.t << "," << s.funtf_residual << "," << s.od_margin;
    for (int n = 0; n < f0.N(); ++n)
      for (int i = 0; i < f0.d(); ++i) {
        const Complex z = s.frame.matrix()(i, n);
        if (complex_field)
          out << "," << z.real() << "," << z.imag();
        else
          out << "," << z.real();
      }
    out << "\n";
  }
  return out.str();
}

void save_path_csv(const FramePath& p, const std::string& path) { spit(path, path_to_csv(p)); }

}  // namespace funtf
