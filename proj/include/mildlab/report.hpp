#pragma once

#include <string>
#include <vector>

#include "mildlab/charts.hpp"
#include "mildlab/diophantine.hpp"
#include "mildlab/mildness.hpp"
#include "mildlab/substitution.hpp"

namespace mildlab {

/// Report serialization with pinned formatting so identical runs produce
/// byte-identical files: 17 significant digits in JSON, 9 in CSV, fixed
/// key order, '\n' line endings.

std::string json_escape(const std::string& s);
std::string format_double_json(double v);  // %.17g
std::string format_double_csv(double v);   // %.9g

std::string to_json(const MildParams& params);
std::string to_json(const VerificationReport& report);
std::string to_json(const LemmaReport& report);
std::string to_json(const MainTheoremReport& report);

/// Aggregate of named JSON fragments: {"name1": frag1, ...}.
std::string json_object(const std::vector<std::pair<std::string, std::string>>& fields);
std::string json_string(const std::string& s);
std::string json_array(const std::vector<std::string>& fragments);

std::string error_json(const std::string& invariant, const std::string& message);

/// CSV: header "r,norm_mode,N,count,worst_norm,pass".
std::string charts_csv(const std::vector<ChartSet>& sets);
/// CSV: header "H,points,degree_d,cover_size,logH_pow_c2"; the pass/fail
/// verdict travels through CountTable::pass and the process exit code.
std::string count_csv(const CountTable& table);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partial report.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace mildlab
