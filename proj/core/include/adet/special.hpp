#pragma once

namespace adet {

/// IG_{k+1}(a) = e^{-a} sum_{m=0}^{k} a^m / m!, i.e. the regularized upper
/// incomplete gamma Q(k+1, a). Terms are built by the recurrence
/// t_{m+1} = t_m a/(m+1) in the log domain so large `a` does not overflow.
double incomplete_gamma_reg(int k_plus_1, double a);

/// 1 - IG_{k+1}(a), computed without cancellation for small `a`.
double incomplete_gamma_reg_complement(int k_plus_1, double a);

/// log C(n, k) via lgamma.
double log_binomial(int n, int k);

/// log((n-1)! / (n+k-1)!) for n >= 1, k >= 0.
double log_factorial_ratio(int n, int k);

}  // namespace adet
