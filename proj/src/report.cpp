#include "mildlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mildlab {

namespace {

std::string int_str(long long v) { return std::to_string(v); }

std::string bool_str(bool v) { return v ? "true" : "false"; }

std::string multiindex_json(const MultiIndex& nu) {
  std::string out = "[";
  for (int i = 0; i < nu.dim(); ++i) {
    if (i) out += ",";
    out += std::to_string(nu[i]);
  }
  return out + "]";
}

std::string point_json(const std::vector<double>& x) {
  std::string out = "[";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ",";
    out += format_double_json(x[i]);
  }
  return out + "]";
}

}  // namespace

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string format_double_json(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_double_csv(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string json_string(const std::string& s) { return "\"" + json_escape(s) + "\""; }

std::string json_object(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out = "{";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += "\"" + fields[i].first + "\":" + fields[i].second;
  }
  return out + "}";
}

std::string json_array(const std::vector<std::string>& fragments) {
  std::string out = "[";
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (i) out += ",";
    out += fragments[i];
  }
  return out + "]";
}

std::string to_json(const MildParams& params) {
  std::vector<std::pair<std::string, std::string>> fields{
      {"A", format_double_json(params.A)},
      {"B", format_double_json(params.B)},
      {"C", format_double_json(params.C)},
  };
  if (params.order != kUnboundedOrder) {
    fields.emplace_back("order", int_str(params.order));
  }
  return json_object(fields);
}

std::string to_json(const VerificationReport& report) {
  return json_object({
      {"params", to_json(report.params)},
      {"order", int_str(report.order)},
      {"samples", int_str(report.sample_count)},
      {"worst_ratio", format_double_json(report.worst_ratio)},
      {"worst_nu", multiindex_json(report.worst_nu)},
      {"worst_point", point_json(report.worst_point)},
      {"fitted_A_star", format_double_json(report.fitted_A_star)},
      {"pass", bool_str(report.pass)},
      {"note", json_string(report.note)},
  });
}

std::string to_json(const LemmaReport& report) {
  return json_object({
      {"lemma", json_string(report.lemma)},
      {"fixture", json_string(report.fixture)},
      {"r_or_kappa", format_double_json(report.r_or_kappa)},
      {"order", int_str(report.order)},
      {"fitted_A", format_double_json(report.fitted_A)},
      {"fitted_B", format_double_json(report.fitted_B)},
      {"worst_ratio", format_double_json(report.worst_ratio)},
      {"worst_point", point_json(report.worst_point)},
      {"worst_nu", multiindex_json(report.worst_nu)},
      {"excluded_points", int_str(report.excluded_points)},
      {"pass", bool_str(report.pass)},
      {"note", json_string(report.note)},
  });
}

std::string to_json(const MainTheoremReport& report) {
  return json_object({
      {"r_or_kappa", format_double_json(report.r_or_kappa)},
      {"order", int_str(report.order)},
      {"certificate", to_json(report.certificate)},
      {"fitted_A_per_r", format_double_json(report.fitted_A_per_r)},
      {"excluded_points", int_str(report.excluded_points)},
      {"note", json_string(report.note)},
  });
}

std::string error_json(const std::string& invariant, const std::string& message) {
  return json_object({
             {"error", json_object({
                           {"invariant", json_string(invariant)},
                           {"message", json_string(message)},
                       })},
         }) +
         "\n";
}

std::string charts_csv(const std::vector<ChartSet>& sets) {
  std::string out = "r,norm_mode,N,count,worst_norm,pass\n";
  for (const ChartSet& set : sets) {
    out += int_str(set.r);
    out += ",";
    out += norm_mode_name(set.mode);
    out += ",";
    out += int_str(set.N);
    out += ",";
    out += int_str(set.count);
    out += ",";
    out += format_double_csv(set.worst_norm);
    out += ",";
    out += set.pass ? "1" : "0";
    out += "\n";
  }
  return out;
}

std::string count_csv(const CountTable& table) {
  std::string out = "H,points,degree_d,cover_size,logH_pow_c2\n";
  for (const CountRow& row : table.rows) {
    out += int_str(row.H);
    out += ",";
    out += int_str(row.points);
    out += ",";
    out += int_str(row.degree_d);
    out += ",";
    out += int_str(row.cover_size);
    out += ",";
    out += format_double_csv(row.log_h_pow_c2);
    out += "\n";
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace mildlab
