# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 模型包导出
"""

from .base import (
    ErrorType,
    MyBaseModel,
    ToolSuggestion,
    LabError,
    LabResult,
    LabException,
    DomainError,
    SingularTimeError,
    CoverageError,
    UnsupportedFamilyError,
    DiscontinuityZoneError,
    VacuumError,
    NumericalAbort,
    ConfigError,
)

from .fluid import (
    Polytrope,
    Primitive,
    Conserved,
    EntropyState,
)

from .symmetry import (
    Sl2Element,
    GalileiElement,
    GroupElement,
    RepresentationMatrix,
    STACK_LABELS,
)

from .field import (
    Geometry,
    Boundary,
    Snapshot,
    SpacetimeField,
)

from .shock import (
    FamilyKind,
    CurrentFamily,
    CurrentSample,
    ShockFront,
    Verdict,
    Admissibility,
    JumpRecord,
    JumpReport,
    STANDARD_FAMILIES,
    EXTENDED_FAMILIES,
)

from .config import (
    EosSection,
    GridSection,
    InitialSection,
    StateSection,
    GroupSection,
    RunSection,
    Tolerances,
    SweepSection,
    ScenarioConfig,
)

__all__ = [
    # 基础模型
    "ErrorType",
    "MyBaseModel",
    "ToolSuggestion",
    "LabError",
    "LabResult",
    "LabException",
    "DomainError",
    "SingularTimeError",
    "CoverageError",
    "UnsupportedFamilyError",
    "DiscontinuityZoneError",
    "VacuumError",
    "NumericalAbort",
    "ConfigError",
    # 流体状态
    "Polytrope",
    "Primitive",
    "Conserved",
    "EntropyState",
    # 对称群
    "Sl2Element",
    "GalileiElement",
    "GroupElement",
    "RepresentationMatrix",
    "STACK_LABELS",
    # 网格场
    "Geometry",
    "Boundary",
    "Snapshot",
    "SpacetimeField",
    # 守恒流与激波
    "FamilyKind",
    "CurrentFamily",
    "CurrentSample",
    "ShockFront",
    "Verdict",
    "Admissibility",
    "JumpRecord",
    "JumpReport",
    "STANDARD_FAMILIES",
    "EXTENDED_FAMILIES",
    # 场景配置
    "EosSection",
    "GridSection",
    "InitialSection",
    "StateSection",
    "GroupSection",
    "RunSection",
    "Tolerances",
    "SweepSection",
    "ScenarioConfig",
]
