# Copyright 2026 The Heatcloak Authors
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
"""Private release of diffusion sensor measurements and EMD-scored recovery."""

from heatcloak._core import (
    bpd_solve,
    denoise_backdoor,
    emd,
    emd_line,
    fano_packing,
    feasibility_radius,
    gaussian_kernel,
    gaussian_sigma,
    graph_diffusion_operator,
    heat_kernel_matrix,
    lower_bound,
    preset_config,
    preset_names,
    privatize,
    run_sweep,
    sensitivity_line,
    upper_bound,
)

__all__ = [
    "bpd_solve",
    "denoise_backdoor",
    "emd",
    "emd_line",
    "fano_packing",
    "feasibility_radius",
    "gaussian_kernel",
    "gaussian_sigma",
    "graph_diffusion_operator",
    "heat_kernel_matrix",
    "lower_bound",
    "preset_config",
    "preset_names",
    "privatize",
    "run_sweep",
    "sensitivity_line",
    "upper_bound",
]

__version__ = "0.1.0"
