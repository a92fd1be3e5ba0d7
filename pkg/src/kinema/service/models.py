"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field


class FilterParamsModel(BaseModel):
    order: Literal["C1", "C2", "C3"]
    limiter: Literal["tanh", "hard"] = "tanh"
    sigma: float = 0.5
    rho: float = 0.0
    beta: int = 5
    p_min: float
    p_max: float
    velocity_limit: float
    acceleration_limit: Optional[float] = None
    jerk_limit: Optional[float] = None
    sample_rate: float = 60.0
    stabilizer_enabled: bool = True


class TrajectoryPoint(BaseModel):
    t: float
    s: float


class FilterRunRequest(BaseModel):
    params: Union[str, FilterParamsModel] = Field(
        description="preset name or explicit parameters")
    input: Union[str, list[TrajectoryPoint]] = Field(
        description="input preset name (phi_l/phi_r/phi_c) or explicit points")
    rate: float = 60.0
    duration: float = 10.0
    seed: int = 0
    x0: Optional[float] = None


class FilterSample(BaseModel):
    t: float
    x: float
    v: float
    a: float
    j: float


class FilterRunResponse(BaseModel):
    rows: list[FilterSample]


class ProfileRequest(BaseModel):
    embodiment: dict


class ProfileResponse(BaseModel):
    name: str
    stationary: int
    spatial: int
    display: int
    audible: int


class ValidateRequest(BaseModel):
    embodiment: dict
    clip: dict
    rate: float = 60.0


class ViolationModel(BaseModel):
    dof: str
    index: int
    t: float
    kind: Literal["position", "velocity", "acceleration", "jerk"]
    actual: float
    limit: float


class ValidateResponse(BaseModel):
    violations: list[ViolationModel]
    by_kind: dict[str, int]
    by_dof: dict[str, int]


class GhostRequest(BaseModel):
    embodiment: dict
    clip: dict
    params: Union[str, FilterParamsModel]
    rate: float = 60.0


class GhostDoFResult(BaseModel):
    samples: list[FilterSample]
    max_deviation: float


class GhostResponse(BaseModel):
    corrected: dict[str, GhostDoFResult]
    residual_violations: list[ViolationModel]


class ProgramRunRequest(BaseModel):
    embodiment: dict
    program: dict
    clips: dict[str, dict] = Field(default_factory=dict)
    rate: float = 60.0
    duration: float = 1.0
    inputs: list[dict] = Field(
        default_factory=list,
        description="scripted inputs: [{'t': seconds, ...input map}]")


class FrameModel(BaseModel):
    t: float
    dt: float
    channels: dict[str, Union[float, str]]


class ProgramRunResponse(BaseModel):
    frames: list[FrameModel]


class PresetInfo(BaseModel):
    name: str
    params: FilterParamsModel


class PresetListResponse(BaseModel):
    filters: list[PresetInfo]
    inputs: list[str]
