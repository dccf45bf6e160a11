#pragma once

#include <string>

#include "funtf/frames.hpp"

namespace funtf {

// Frame JSON:
//   {"field":"real"|"complex","d":int,"N":int,"columns":[[[re,im],...],...]}
// columns holds N entries of d [re, im] pairs; REAL frames serialize im = 0.
Frame load_frame(const std::string& path);
void save_frame(const Frame& f, const std::string& path);
std::string frame_to_json_string(const Frame& f);
Frame frame_from_json_string(const std::string& text);

// Eigensteps JSON: {"N":int,"d":int,"rows":[[float,...],...]} with N+1 rows.
EigenstepsTable load_table(const std::string& path);
void save_table(const EigenstepsTable& t, const std::string& path);
std::string table_to_json_string(const EigenstepsTable& t);
EigenstepsTable table_from_json_string(const std::string& text);

// CSV export of a table: one row per n, d comma-separated values.
std::string table_to_csv(const EigenstepsTable& t);

// FramePath CSV: header row, then per sample
//   t, funtf_residual, od_margin, flattened frame entries
// (entry f{n}_{i} for REAL frames, f{n}_{i}_re / f{n}_{i}_im for COMPLEX).
std::string path_to_csv(const FramePath& p);
void save_path_csv(const FramePath& p, const std::string& path);

}  // namespace funtf
