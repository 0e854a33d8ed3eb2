// Copyright (c) 2026 The finr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Shared between the scalar and SIMD sincos kernels. Arguments are reduced as
//   t = k/4 + r,  |r| <= 1/8,  theta = 2 pi r in [-pi/4, pi/4]
// and sin/cos of theta come from truncated Taylor series (through theta^17
// and theta^16), whose truncation error is below 1e-18 on that interval.
// The quadrant k mod 4 then rotates (cos, sin) by k * pi/2.

namespace finr::kernels::detail {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

constexpr double inv_factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return 1.0 / f;
}

// Coefficients in z = theta^2, highest order first.
inline constexpr double kSin[] = {
    inv_factorial(17), -inv_factorial(15), inv_factorial(13), -inv_factorial(11),
    inv_factorial(9),  -inv_factorial(7),  inv_factorial(5),  -inv_factorial(3),
    1.0};
inline constexpr double kCos[] = {
    inv_factorial(16), -inv_factorial(14), inv_factorial(12), -inv_factorial(10),
    inv_factorial(8),  -inv_factorial(6),  inv_factorial(4),  -inv_factorial(2),
    1.0};
inline constexpr int kTerms = 9;

}  // namespace finr::kernels::detail
