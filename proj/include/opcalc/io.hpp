#pragma once

#include <string>

#include "json.hpp"
#include "opcalc/complex.hpp"
#include "opcalc/operad.hpp"
#include "opcalc/partition.hpp"
#include "opcalc/simplicial.hpp"
#include "opcalc/symseq.hpp"

namespace opcalc {

using Json = nlohmann::ordered_json;

// Written into every file; readers reject other versions.
inline constexpr const char* kFormatVersion = "1";

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {rows, cols, entries: [[r, c, "v"], …]} with entries sorted by (c, r).
Json matrix_to_json(const ZMatrix& m);
ZMatrix matrix_from_json(const Json& j);

// Standard groups ("1", "C<n>", "S<n>") by name; anything else with its table.
Json group_to_json(const Group& g);
Group group_from_json(const Json& j);

// {version, ring, group, degrees: [lo, hi], basis, diff, action}. diff lists ∂_d for
// d = lo+1..hi; action maps a generator label to one matrix per degree.
Json gcomplex_to_json(const GComplex& x);
GComplex gcomplex_from_json(const Json& j);

// {version, ring, window: {r_max, d_min, d_max}, components: {"<arity>": GComplex}}
Json symseq_to_json(const SymSeq& x);
SymSeq symseq_from_json(const Json& j);

// {version, simplices: [[labels] by dim], faces, degeneracies, basepoint}
Json simplicial_set_to_json(const SimplicialSet& s);

Json homology_to_json(const HomologyGroup& h);
Json check_report_to_json(const CheckReport& r);

// sdBar(Com^nu)(r) through its top level, with the basepoint as simplex 0 in every
// level.
SimplicialSet sd_bar_simplicial_set(const SdBarCom& x);

// Canonical serialisation: two-space indent and a trailing newline.
std::string dump(const Json& j);
Json read_json_file(const std::string& path);
// Writes through a temporary file and a rename, so a failed run leaves nothing behind.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace opcalc
