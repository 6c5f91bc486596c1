#pragma once

namespace mixtest {

// Quantile of the standard normal distribution (inverse CDF).
// Wichura's AS 241 PPND16 algorithm, accurate to ~1e-16 over (0,1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

}  // namespace mixtest
