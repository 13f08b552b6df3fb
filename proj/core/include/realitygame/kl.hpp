#pragma once

namespace rg {

// KL(a || b) between coin biases, in nats. The 0 log 0 terms drop; tiny
// negative rounding near a = b clamps to 0 so the result is never below zero.
// Infinite when a puts mass on a side b rules out.
double kl_bernoulli(double a, double b);

}  // namespace rg
