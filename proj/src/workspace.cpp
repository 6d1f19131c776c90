#include "plnmf/workspace.hpp"

#include <algorithm>

namespace plnmf {

PhaseTimes& PhaseTimes::operator+=(const PhaseTimes& o) {
    precompute_h += o.precompute_h;
    update_h += o.update_h;
    precompute_w += o.precompute_w;
    update_w += o.update_w;
    phase1 += o.phase1;
    phase2 += o.phase2;
    phase3 += o.phase3;
    normalize += o.normalize;
    error_eval += o.error_eval;
    return *this;
}

PhaseTimes PhaseTimes::operator-(const PhaseTimes& o) const {
    PhaseTimes r = *this;
    r.precompute_h -= o.precompute_h;
    r.update_h -= o.update_h;
    r.precompute_w -= o.precompute_w;
    r.update_w -= o.update_w;
    r.phase1 -= o.phase1;
    r.phase2 -= o.phase2;
    r.phase3 -= o.phase3;
    r.normalize -= o.normalize;
    r.error_eval -= o.error_eval;
    return r;
}

UpdateWorkspace::UpdateWorkspace(index_t v, index_t d, index_t k)
    : p(v, k),
      q(k, k),
      r(d, k),
      s(k, k),
      w_new(v, k),
      h_new(d, k),
      column_norms(static_cast<std::size_t>(k), 0.0),
      scratch(static_cast<std::size_t>(std::max(v, d)), 0.0) {}

}  // namespace plnmf
