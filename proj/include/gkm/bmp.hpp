#pragma once

// The canonical sheaf B(v): built upward from v along the order, taking
// at each vertex the free cover of the image of the sections below in
// the incoming edge stalks.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkm/kl.hpp"
#include "gkm/sheaf.hpp"

namespace gkm {

struct cap_abort_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BMPSheaf {
  GSheaf sheaf;
  int base_vertex = 0;
  int cap = 0;
  std::vector<int> order_used; // the linear extension of {x >= v}

  struct VertexTrace {
    int vertex;
    std::map<int, int> delta_hilbert; // Hilbert function of B^{delta x}
    std::vector<int> generator_degrees;
  };
  std::vector<VertexTrace> trace;
};

// linear_extension, when given, must list {x >= v} in a topological
// order; the default processes ready vertices by ShortLex id
BMPSheaf build_bmp(GraphPtr g, int v, int cap,
                   std::optional<std::vector<int>> linear_extension = std::nullopt);

// stalk Hilbert series in t, support only
std::map<std::string, LaurentPoly> bmp_character(const BMPSheaf& b);

struct ProjectivityReport {
  bool stalks_free = true;                       // condition (1), structural
  bool edge_isomorphisms = true;                 // condition (2), degreewise
  std::vector<std::string> failures;
};

// checks the local projectivity conditions on any sheaf with free stalks
ProjectivityReport projectivity_witness(const GSheaf& m);

struct BMPVermaReport {
  bool has_flag = false;
  std::map<std::string, std::vector<int>> flag;
  std::optional<std::pair<std::string, int>> failure;
};

// graded-freeness of ker(B^x -> B^{delta x}) for every support vertex
BMPVermaReport bmp_verma_flag(const BMPSheaf& b);

} // namespace gkm
