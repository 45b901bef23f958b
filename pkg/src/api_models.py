"""
api_models.py
------------
Pydantic models for input documents, command reports, and API request/response
validation.
"""

from pydantic import BaseModel, Field
from typing import Optional, Dict, Any, List
from enum import Enum

from config import REPORT_SCHEMA_VERSION


class Side(str, Enum):
    """Module sides"""
    LEFT = "left"
    RIGHT = "right"


# === input documents ===

class HomEntry(BaseModel):
    """Generator orders of one hom group, with optional DSL labels"""
    dom: str
    cod: str
    moduli: List[int] = Field(default_factory=list, description="Orders of the coordinate generators")
    labels: Optional[List[str]] = None


class ComposeEntry(BaseModel):
    """
    The composite of generator `left` of hom(mid, cod) after generator `right`
    of hom(dom, mid), in coordinates of hom(dom, cod).
    """
    dom: str
    mid: str
    cod: str
    left: int = Field(..., ge=0)
    right: int = Field(..., ge=0)
    value: List[int]


class RingoidDocument(BaseModel):
    """A finite ringoid given by hom groups, a composition table and identities"""
    name: str
    objects: List[str] = Field(..., min_length=1)
    homs: List[HomEntry]
    compose: List[ComposeEntry] = Field(default_factory=list)
    identities: Dict[str, List[int]]

    class Config:
        json_schema_extra = {
            "example": {
                "name": "z4",
                "objects": ["R"],
                "homs": [{"dom": "R", "cod": "R", "moduli": [4], "labels": ["1"]}],
                "compose": [{"dom": "R", "mid": "R", "cod": "R", "left": 0, "right": 0, "value": [1]}],
                "identities": {"R": [1]}
            }
        }


class ActionEntry(BaseModel):
    """Action of generator `generator` of hom(dom, cod): rows are images of the fiber basis"""
    dom: str
    cod: str
    generator: int = Field(..., ge=0)
    matrix: List[List[int]]


class ModuleDocument(BaseModel):
    """A finite module over a named ringoid"""
    ring: str
    side: Side = Side.RIGHT
    name: str = ""
    fibers: Dict[str, List[int]]
    actions: List[ActionEntry] = Field(default_factory=list)

    class Config:
        json_schema_extra = {
            "example": {
                "ring": "z4",
                "side": "right",
                "name": "z2",
                "fibers": {"R": [2]},
                "actions": [{"dom": "R", "cod": "R", "generator": 0, "matrix": [[1]]}]
            }
        }


# === reports ===

class Report(BaseModel):
    """Machine-readable outcome of one command"""
    schema_version: str = REPORT_SCHEMA_VERSION
    command: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    decision: Any = None
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    timings: Optional[Dict[str, float]] = None


# === API requests ===

class FormulaRequest(BaseModel):
    """A formula in DSL syntax over a built-in ring, optionally with a module"""
    ring: str = Field(..., description="Name of a built-in ring")
    formula: str = Field(..., min_length=1, description="pp formula in DSL syntax")
    side: Side = Side.RIGHT
    module: Optional[str] = Field(default=None, description="Module expression, e.g. 'regular+s1'")
    method: str = Field(default="structured", description="structured, enumerate or auto")

    class Config:
        json_schema_extra = {
            "example": {
                "ring": "z4",
                "formula": "E y . x + y*2 = 0",
                "side": "right",
                "module": "z2"
            }
        }


class ImplicationRequest(BaseModel):
    """Does `premise` imply `conclusion`?"""
    ring: str
    premise: str = Field(..., min_length=1)
    conclusion: str = Field(..., min_length=1)
    side: Side = Side.RIGHT


class HerzogRequest(BaseModel):
    """r̄ from a right module, s̄ from a left module; tuples as 'P:1,0; Q:1'"""
    ring: str
    right_module: str
    left_module: str
    r: str
    s: str


class ErrorResponse(BaseModel):
    """Response model for errors"""
    success: bool = False
    error: str = Field(..., description="Error message")
    error_type: str = Field(..., description="Type of error")


class ConfigResponse(BaseModel):
    """Built-in rings and their named modules"""
    rings: Dict[str, str]
    modules: Dict[str, List[str]]
    schema_version: str = REPORT_SCHEMA_VERSION
