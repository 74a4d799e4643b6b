"""
Pydantic schemas for the JSON documents printed by the command line.

Field order fixes key order, so dumps are byte-stable.
"""

from typing import List

from pydantic import BaseModel


class StalkRowModel(BaseModel):
    k: List[int]
    orbit_r: List[int]
    orbit_h: List[int]
    poincare: List[int]
    codim: int


class StalkTableModel(BaseModel):
    dim: List[int]
    r: List[int]
    h: List[int]
    rows: List[StalkRowModel]


class ComponentModel(BaseModel):
    dim: List[int]
    r: List[int]
    h: List[int]
    omega: List[int]
    dimension: int
    rationally_smooth: bool


class CanonicalTermModel(BaseModel):
    k: List[int]
    coefficient: str


class CanonicalExpansionModel(BaseModel):
    dim: List[int]
    r: List[int]
    h: List[int]
    terms: List[CanonicalTermModel]


class HallTermModel(BaseModel):
    multisegment: str
    coefficient: str


class HallProductModel(BaseModel):
    n: int
    lhs: str
    rhs: str
    product: str
    terms: List[HallTermModel]


class OrbitModel(BaseModel):
    r: List[int]
    h: List[int]
    dimension: int
    is_component: bool
    degenerations: List[List[int]]


class BasisElementModel(BaseModel):
    leading: str
    element: str
    terms: List[HallTermModel]


class CheckModel(BaseModel):
    suite: str
    name: str
    passed: bool
    detail: str


class VerificationReportModel(BaseModel):
    passed: bool
    total: int
    failed: int
    checks: List[CheckModel]
    failures: List[CheckModel]


class CacheValidationModel(BaseModel):
    path: str
    entries: int
    valid: bool
