#pragma once

// JSON serialization of graphs, modules, sheaves, and run reports.
// Everything round-trips: emitted JSON re-reads into structurally equal
// objects, and emission is byte-stable for identical inputs.

#include <json.hpp>
#include <string>

#include "gkm/bmp.hpp"
#include "gkm/graph.hpp"
#include "gkm/kl.hpp"
#include "gkm/sheaf.hpp"
#include "gkm/zmod.hpp"

namespace gkm {

using ordered_json = nlohmann::ordered_json;

extern const char* const kEngineVersion;

ordered_json poly_to_json(const Poly& p, int dim);
Poly poly_from_json(const ordered_json& j, int dim);

ordered_json graph_to_json(const MomentGraph& g);
MomentGraph graph_from_json(const ordered_json& j);

ordered_json zmodule_to_json(const ZModule& m);
ZModule zmodule_from_json(const ordered_json& j, bool verify_closure = false);

ordered_json sheaf_to_json(const GSheaf& m);
GSheaf sheaf_from_json(const ordered_json& j);

ordered_json laurent_to_json(const LaurentPoly& p);

ordered_json bmp_to_json(const BMPSheaf& b);
ordered_json kl_table_to_json(const CoxeterGroup& group, const KLTable& t);
ordered_json kl_compare_to_json(const KLCompareReport& r);

// report wrapper: every numeric claim carries the cap it was verified under
ordered_json make_report(const std::string& command, const std::string& inputs_digest,
                         int cap, const std::string& mode, ordered_json results);

std::string fnv1a_digest(const std::string& data);

} // namespace gkm
