"""
api_server.py
------------
FastAPI server that exposes the pp-formula calculus through a REST API.
Every successful response body is a Report.
"""

import json

from fastapi import FastAPI, File, HTTPException, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
import uvicorn
from pydantic import ValidationError

from api_models import (
    ConfigResponse,
    ErrorResponse,
    FormulaRequest,
    HerzogRequest,
    ImplicationRequest,
    Report,
    RingoidDocument,
)
from catalog import get_ring, load_fixtures, module_names, ring_names
from document_service import (
    ringoid_from_document,
    run_demo_eps,
    run_dual,
    run_eval,
    run_herzog,
    run_implies,
)
from errors import DocumentError, PpCalcError
from persistence import log_action


# Create FastAPI app
app = FastAPI(
    title="pp-calc API",
    description="Exact evaluation, duality and tensor checks for pp formulas over finite rings and ringoids",
    version="1.0.0",
    docs_url="/api/docs",
    redoc_url="/api/redoc"
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/", summary="Health Check")
async def root():
    """Health check endpoint"""
    return {"message": "pp-calc API is running"}


@app.get("/api/v1/config", response_model=ConfigResponse, summary="Get Configuration")
async def get_config():
    """Built-in rings and the module names available on each"""
    rings = load_fixtures()["rings"]
    modules = {name: module_names(get_ring(name), "right") for name in ring_names()}
    return ConfigResponse(rings={name: rings[name]["description"] for name in ring_names()}, modules=modules)


@app.post("/api/v1/eval", response_model=Report, summary="Evaluate a Formula")
async def evaluate_formula(request: FormulaRequest):
    """φ(M) for a formula over a built-in ring; M defaults to the regular module"""
    log_action(f"API eval on '{request.ring}': {request.formula}")
    return run_eval(get_ring(request.ring), request.module, request.formula, request.side.value, request.method)


@app.post("/api/v1/dual", response_model=Report, summary="Dual Formula")
async def dual_formula(request: FormulaRequest):
    log_action(f"API dual on '{request.ring}': {request.formula}")
    return run_dual(get_ring(request.ring), request.formula, request.side.value)


@app.post("/api/v1/implies", response_model=Report, summary="Implication")
async def implication(request: ImplicationRequest):
    log_action(f"API implies on '{request.ring}'")
    return run_implies(get_ring(request.ring), request.premise, request.conclusion, request.side.value)


@app.post("/api/v1/herzog", response_model=Report, summary="Tensor Criterion")
async def herzog(request: HerzogRequest):
    """Decide r̄ ⊗ s̄ = 0 and return the witness formula or the nonzero class"""
    log_action(f"API herzog on '{request.ring}'")
    return run_herzog(get_ring(request.ring), request.right_module, request.left_module, request.r, request.s)


@app.get("/api/v1/demo-4-3", response_model=Report, summary="Five Sorts over F_p[e]")
@app.get("/api/v1/demo-eps", response_model=Report, summary="Five Sorts over F_p[e]")
async def demo_eps(field: str = "f2"):
    return run_demo_eps(field)


@app.post("/api/v1/ringoids/validate", response_model=Report, summary="Validate a Ringoid Document")
async def validate_ringoid(document: UploadFile = File(..., description="Ringoid document (.json)")):
    """Upload a ringoid document; the report lists its objects and total order"""
    if not document.filename.endswith(".json"):
        raise HTTPException(status_code=400, detail="Ringoid document must be a .json file")
    content = await document.read()
    try:
        data = json.loads(content)
        doc = RingoidDocument.model_validate(data)
    except (json.JSONDecodeError, ValidationError) as e:
        raise DocumentError(f"malformed ringoid document: {e}")
    print(f"🔍 Validating uploaded ringoid '{doc.name}'")
    R = ringoid_from_document(doc)
    return Report(
        command="validate",
        inputs={"file": document.filename},
        decision="valid",
        witnesses=[{"kind": "ringoid", "name": R.name, "objects": list(R.objects), "total_order": R.total_order}],
    )


@app.exception_handler(PpCalcError)
async def pp_error_handler(request: Request, exc: PpCalcError):
    """Bad input or failed validation"""
    print(f"❌ {type(exc).__name__}: {exc}")
    body = ErrorResponse(error=str(exc), error_type=type(exc).__name__)
    return JSONResponse(status_code=400, content=body.model_dump())


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    """Handle general exceptions"""
    print(f"❌ Unexpected {type(exc).__name__} on {request.url.path}: {exc}")
    log_action(f"API request {request.url.path} failed: {type(exc).__name__}: {exc}")
    body = ErrorResponse(error="An unexpected error occurred", error_type="InternalServerError")
    return JSONResponse(status_code=500, content=body.model_dump())


if __name__ == "__main__":
    print("🚀 Starting pp-calc API Server...")
    print("📖 API Documentation: http://localhost:8000/api/docs")
    print("🔄 Auto-reload enabled for development")

    uvicorn.run(
        "api_server:app",
        host="0.0.0.0",
        port=8000,
        reload=True,
        log_level="info"
    )
