#pragma once

namespace amalgam {

/// Relative tolerance used by every equality and inequality check in the
/// library. Defaults to 1e-12; the AMALGAM_TOL environment variable
/// overrides it (read once, on first use).
double tolerance();

/// |a - b| <= tolerance() * scale.
bool approx_equal(double a, double b, double scale = 1.0);

/// a <= b up to tolerance() relative to max(|a|, |b|).
bool approx_leq(double a, double b);

}  // namespace amalgam
