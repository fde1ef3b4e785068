#pragma once

namespace ddsm {

/// Which reading of the hold-error estimates to use. kPaper reproduces the
/// published closed forms; kStrict is a true supremum bound for any step
/// alignment.
enum class BoundVariant { kPaper, kStrict };

/// 2^-(B-1), the worst-case amplitude quantization error.
double quantization_error_bound(int bits);

/// Peak-to-peak span of the unit target sine.
double full_scale_range();

/// Lowest clock able to produce one output every `dt` seconds.
double min_clock_frequency(double dt);

/// Largest phase lag a hold of `dt` seconds introduces: 2*pi*f*dt.
double max_phase_shift(double frequency_hz, double dt);

// Paper: sin(2*pi*f*dt) for f*dt <= 1/4, else the universal cap 2.
// Strict: 2*sin(pi*f*dt) for f*dt <= 1/2, else 2.
double held_error_bound(double frequency_hz, double dt, BoundVariant variant);

// Paper: (1 + |2^(B-1) sin(2*pi*f*dt)|) / 2^(B-1), uncapped.
// Strict: quantization_error_bound(B) + held_error_bound(f, dt, kStrict).
double digitized_error_bound(double frequency_hz, double dt, int bits,
                             BoundVariant variant);

}  // namespace ddsm
