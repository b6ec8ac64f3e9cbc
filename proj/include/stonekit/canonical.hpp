#pragma once

#include <string>
#include <vector>

#include "stonekit/po_system.hpp"

namespace stonekit::po {

// Canonical labelling of a PO system decorated with subset marks and
// per-element integer weight channels.  Two decorated systems get equal
// `bytes` iff some order-isomorphism matches every mark and weight channel.
// `perm[i]` is the canonical position of element i; the name list plays no
// role in equality.
struct CanonicalResult {
  std::string bytes;
  std::vector<int> perm;
};

CanonicalResult canonical_form(const POSystem& p, const std::vector<Mask>& marks,
                               const std::vector<std::vector<long long>>& weights);

}  // namespace stonekit::po
