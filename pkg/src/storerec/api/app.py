"""HTTP facade over the Store: sessions, shopping flow, catalog, admin.

All endpoints live under /v1. Domain errors map to one machine-readable
code each; malformed bodies come back as 400-class responses with the
same error shape.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from storerec.api import schemas
from storerec.catalog import StoreLayout, load_layout, sample_layout
from storerec.config import ServiceConfig
from storerec.errors import StoreRecError
from storerec.store import PanelView, Store

LAYOUT_FORMAT_FIELD = "store-layout/1"


def create_app(config: ServiceConfig | None = None, layout: StoreLayout | None = None,
               store: Store | None = None) -> FastAPI:
    config = config or ServiceConfig()
    if store is None:
        if layout is None:
            layout = load_layout(config.layout_path) if config.layout_path else sample_layout()
        store = Store(layout, config)

    app = FastAPI(title="storerec", version="1.0")
    app.state.store = store

    @app.exception_handler(StoreRecError)
    async def domain_error(_request: Request, exc: StoreRecError):
        body = schemas.ErrorBody(code=exc.code, message=str(exc))
        return JSONResponse(status_code=exc.http_status, content=body.model_dump())

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        body = schemas.ErrorBody(code="malformed_body", message=str(exc.errors()))
        return JSONResponse(status_code=400, content=body.model_dump())

    def panel_payload(view: PanelView) -> schemas.RecommendationPanel:
        items = [
            schemas.PanelItem(
                item_id=item_id,
                name=store.layout.items[item_id].name,
                score=score,
                source=source,
                attributes=store.layout.items[item_id].attributes,
            )
            for item_id, score, source in zip(view.items, view.scores, view.sources)
        ]
        size = view.page_size
        pages = [items[i:i + size] for i in range(0, len(items), size)]
        return schemas.RecommendationPanel(
            rec_id=view.rec_id, page_size=size, total_items=len(items), pages=pages)

    @app.post("/v1/sessions", response_model=schemas.SessionCreated, status_code=201)
    def create_session(body: schemas.CreateSessionRequest):
        session = store.create_session(body.user_id)
        return schemas.SessionCreated(session_id=session.session_id, user_id=body.user_id)

    @app.post("/v1/sessions/{session_id}/position", response_model=schemas.PositionResponse)
    def post_position(session_id: str, body: schemas.PositionRequest):
        result = store.position(session_id, body.x, body.y, body.t)
        return schemas.PositionResponse(
            current_shelf=result.current_shelf,
            dwell_seconds=result.dwell_seconds,
            last_qualifying_shelf=result.last_qualifying_shelf,
        )

    @app.post("/v1/sessions/{session_id}/pickup", response_model=schemas.InfoPanelResponse)
    def post_pickup(session_id: str, body: schemas.PickupRequest):
        item = store.pickup(session_id, body.item_id)
        return schemas.InfoPanelResponse(
            item_id=item.item_id, name=item.name,
            shelf_id=item.shelf_id, attributes=item.attributes)

    @app.post("/v1/sessions/{session_id}/decision", response_model=schemas.DecisionResponse)
    def post_decision(session_id: str, body: schemas.DecisionRequest):
        result = store.decision(session_id, body.item_id, body.bought)
        return schemas.DecisionResponse(
            bought=result.bought,
            applied_delta=result.applied_delta,
            cart=result.cart,
            panel=panel_payload(result.panel) if result.panel else None,
            catalog_exhausted=result.catalog_exhausted,
        )

    @app.post("/v1/sessions/{session_id}/panels/{rec_id}/purchase",
              response_model=schemas.CartState)
    def post_panel_purchase(session_id: str, rec_id: str, body: schemas.PanelPurchaseRequest):
        cart = store.panel_purchase(session_id, rec_id, body.item_id)
        return schemas.CartState(session_id=session_id, cart=cart)

    @app.post("/v1/sessions/{session_id}/panels/{rec_id}/dismiss",
              response_model=schemas.SettlementResponse)
    def post_panel_dismiss(session_id: str, rec_id: str):
        deltas = store.panel_dismiss(session_id, rec_id)
        reasons = {True: "rec_buy", False: "rec_decline"}
        return schemas.SettlementResponse(
            rec_id=rec_id,
            deltas=[
                schemas.AppliedDelta(item_id=i, delta=d, reason=reasons[d > 0])
                for i, d in deltas.items()
            ],
        )

    @app.post("/v1/sessions/{session_id}/checkout", response_model=schemas.Receipt)
    def post_checkout(session_id: str):
        receipt = store.checkout(session_id)
        return schemas.Receipt(
            session_id=receipt.session_id,
            user_id=str(receipt.user_id),
            cart=receipt.cart,
            deltas=[
                schemas.AppliedDelta(item_id=i, delta=d, reason=r)
                for i, d, r in receipt.deltas
            ],
        )

    @app.get("/v1/catalog", response_model=schemas.CatalogDoc)
    def get_catalog():
        return schemas.CatalogDoc(
            format=LAYOUT_FORMAT_FIELD,
            items=[
                schemas.ItemDoc(item_id=i.item_id, name=i.name,
                                shelf_id=i.shelf_id, attributes=i.attributes)
                for i in store.layout.items.values()
            ],
        )

    @app.get("/v1/layout", response_model=schemas.LayoutDoc)
    def get_layout():
        return schemas.LayoutDoc(
            format=LAYOUT_FORMAT_FIELD,
            shelves=[
                schemas.ShelfDoc(shelf_id=s.shelf_id,
                                 zone_min=s.zone.min_corner,
                                 zone_max=s.zone.max_corner,
                                 items=list(s.item_ids))
                for s in store.layout.shelves.values()
            ],
        )

    @app.post("/v1/admin/model/rebuild", response_model=schemas.RebuildResponse)
    def rebuild_model(body: schemas.RebuildRequest):
        duration = store.rebuild_model(body.kind)
        return schemas.RebuildResponse(kind=body.kind, build_duration_seconds=duration)

    @app.get("/v1/admin/model/stats", response_model=schemas.ModelStats)
    def model_stats():
        stats = store.model_stats()
        return schemas.ModelStats(
            item_item=schemas.ModelKindStats(**stats["item_item"]),
            user_user=schemas.ModelKindStats(**stats["user_user"]),
        )

    return app
