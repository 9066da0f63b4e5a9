"""Pydantic request/response models for the versioned HTTP API."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    code: str
    message: str


class CreateSessionRequest(BaseModel):
    user_id: str


class SessionCreated(BaseModel):
    session_id: str
    user_id: str


class PositionRequest(BaseModel):
    x: float
    y: float
    t: float


class PositionResponse(BaseModel):
    current_shelf: Optional[str] = None
    dwell_seconds: float
    last_qualifying_shelf: Optional[str] = None


class PickupRequest(BaseModel):
    item_id: str


class InfoPanelResponse(BaseModel):
    item_id: str
    name: str
    shelf_id: str
    attributes: dict[str, Any] = Field(default_factory=dict)


class DecisionRequest(BaseModel):
    item_id: str
    bought: bool


class PanelItem(BaseModel):
    item_id: str
    name: str
    score: float
    source: str
    attributes: dict[str, Any] = Field(default_factory=dict)


class RecommendationPanel(BaseModel):
    rec_id: str
    page_size: int
    total_items: int
    pages: list[list[PanelItem]]


class DecisionResponse(BaseModel):
    bought: bool
    applied_delta: float
    cart: list[str]
    panel: Optional[RecommendationPanel] = None
    catalog_exhausted: bool = False


class PanelPurchaseRequest(BaseModel):
    item_id: str


class CartState(BaseModel):
    session_id: str
    cart: list[str]


class AppliedDelta(BaseModel):
    item_id: str
    delta: float
    reason: str


class SettlementResponse(BaseModel):
    rec_id: str
    deltas: list[AppliedDelta]


class Receipt(BaseModel):
    session_id: str
    user_id: str
    cart: list[str]
    deltas: list[AppliedDelta]


class ShelfDoc(BaseModel):
    shelf_id: str
    zone_min: tuple[float, float]
    zone_max: tuple[float, float]
    items: list[str]


class ItemDoc(BaseModel):
    item_id: str
    name: str
    shelf_id: str
    attributes: dict[str, Any] = Field(default_factory=dict)


class LayoutDoc(BaseModel):
    format: str
    shelves: list[ShelfDoc]


class CatalogDoc(BaseModel):
    format: str
    items: list[ItemDoc]


class RebuildRequest(BaseModel):
    kind: str  # item_item | user_user


class RebuildResponse(BaseModel):
    kind: str
    build_duration_seconds: float


class ModelKindStats(BaseModel):
    entities: int
    pairs: int
    build_duration_seconds: float
    source_revision: int


class ModelStats(BaseModel):
    item_item: ModelKindStats
    user_user: ModelKindStats
