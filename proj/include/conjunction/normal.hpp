// Copyright 2026 The Conjunction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONJUNCTION_NORMAL_HPP_
#define CONJUNCTION_NORMAL_HPP_

namespace conjunction {

// Standard normal CDF via erfc; keeps full relative accuracy in the lower
// tail (Phi(-38) ~ 2.9e-316 is still representable).
double normal_cdf(double z);

// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

}  // namespace conjunction

#endif  // CONJUNCTION_NORMAL_HPP_
