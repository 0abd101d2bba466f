# Copyright 2026 The fairgamble Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Forecast evaluation through fair gamblers on finite outcome spaces."""

from fairgamble._fairgamble import (
    SCHEMA_VERSION,
    DomainError,
    IngestError,
    NumericError,
    OutcomeSpace,
    PreconditionError,
    PropertyModel,
    ProtocolRun,
    StructuralError,
    audit,
    capital,
    check_metric_orders,
    check_refinement_order,
    check_swap_vs_ece_bound,
    direct_metric,
    dominated_by_calibration,
    dominated_by_scaled_regret,
    fixtures,
    is_available,
    level_set_vertices,
    metric_ids,
    recover,
)

__all__ = [
    "SCHEMA_VERSION",
    "DomainError",
    "IngestError",
    "NumericError",
    "OutcomeSpace",
    "PreconditionError",
    "PropertyModel",
    "ProtocolRun",
    "StructuralError",
    "audit",
    "capital",
    "check_metric_orders",
    "check_refinement_order",
    "check_swap_vs_ece_bound",
    "direct_metric",
    "dominated_by_calibration",
    "dominated_by_scaled_regret",
    "fixtures",
    "is_available",
    "level_set_vertices",
    "metric_ids",
    "recover",
]
