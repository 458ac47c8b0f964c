#include "dcsplit/problem.hpp"

namespace dcsplit {

void Problem::validate() const {
  if (!g || !f || !phi || !A || !K || !S) throw InvalidArgument("Problem: missing component");
  if (A->n_in() != K->n_in()) {
    throw InvalidArgument("Problem: A and K must share their input dimension");
  }
  const Vec origin = S->project(Vec::Zero(A->n_in()));
  require_dim(origin.size(), A->n_in(), "Problem: set dimension");
  if (!S->contains(origin, 1e-9)) throw InvalidArgument("Problem: S appears to be empty");
}

Images apply_operators(const Problem& prob, const Vec& x) {
  Images out;
  out.Ax = prob.A->apply(x);
  out.Kx = prob.shares_operator() ? out.Ax : prob.K->apply(x);
  return out;
}

Vec adjoint_difference(const Problem& prob, const Vec& z, const Vec& y) {
  if (prob.shares_operator()) return prob.A->adjoint_apply(z - y);
  return prob.A->adjoint_apply(z) - prob.K->adjoint_apply(y);
}

}  // namespace dcsplit
