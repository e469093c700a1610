#pragma once

namespace ars {

/// Complete elliptic integral of the first kind at modulus 1/sqrt(2)
/// (parameter m = 1/2), by the arithmetic-geometric mean.
double elliptic_K_agm();

struct JacobiValues {
  double cn, sn, dn;
};

/// Jacobi elliptic functions at modulus 1/sqrt(2), any real argument,
/// by the descending Landen (AGM) ladder with backward phase recursion.
JacobiValues jacobi_cn_sn_dn(double u);

}  // namespace ars
