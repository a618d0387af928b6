/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The fathorse Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Prints Leb(C_n(a)) against the bound 2 / 4^{n/k} for one slice, and the
// fat Cantor set measures for the surgered Lorenz map with c = 1.8, p = 2.

#include <cstdio>
#include <cstdlib>

#include "fathorse/cantor_cones.hpp"
#include "fathorse/fat_cantor.hpp"

int main(int argc, char** argv) {
  const int k = argc > 1 ? std::atoi(argv[1]) : 3;
  const double a = argc > 2 ? std::atof(argv[2]) : 0.3;

  const fathorse::cones::ConeSystem sys(k);
  const auto rep = fathorse::cones::verify_cone_bound(sys, a, 12);
  std::printf("k = %d, a = %g\n%4s %22s %22s %10s\n", k, a, "n", "Leb(C_n(a))", "2/4^(n/k)", "ratio");
  for (const auto& row : rep.rows) {
    std::printf("%4d %22.15e %22.15e %10.6f\n", row.n, row.total, row.bound, row.ratio);
  }

  const auto m = fathorse::LorenzBranchMap::from_coefficient(1.8);
  const auto cc = fathorse::cantor::make_construction(m, 2.0);
  std::printf("\na = %.15f  b = %.15f\n", m.a, m.b);
  for (int N : {0, 1, 5, 10, 20}) std::printf("level_measure(%2d) = %.15f\n", N, cc.level_measure(N));
  std::printf("Leb(K)            = %.15f\n", cc.limit_measure());
  return 0;
}
