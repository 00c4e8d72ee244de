# Copyright 2026 The bosonic-saddle Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact and saddle-point boson sampling amplitudes."""

from ._core import (
    BosonicError,
    CoalescingError,
    amplitude_approx,
    amplitude_exact,
    amplitude_exact_log,
    beam_splitter,
    beam_splitter_analytic,
    beam_splitter_exact,
    beam_splitter_regime,
    bell_multiport,
    classical_probability,
    classical_probability_approx,
    count_output_configs,
    flop_estimate,
    haar_random_unitary,
    saddles,
    tritter,
)

__all__ = [
    "BosonicError",
    "CoalescingError",
    "amplitude_approx",
    "amplitude_exact",
    "amplitude_exact_log",
    "beam_splitter",
    "beam_splitter_analytic",
    "beam_splitter_exact",
    "beam_splitter_regime",
    "bell_multiport",
    "classical_probability",
    "classical_probability_approx",
    "count_output_configs",
    "flop_estimate",
    "haar_random_unitary",
    "saddles",
    "tritter",
]
__version__ = "0.1.0"
