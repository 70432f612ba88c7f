import asyncio
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from functools import partial

from dotenv import load_dotenv
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from models.domain import DoubleSpider, PathForest
from models.schemas import (
    QueryBurn,
    QueryChain,
    QueryDoubleSpider,
    QueryPathForest,
    QueryThreshold,
)
from src.budget import SearchBudget
from src.cache import DeficiencyCache
from src.chainlab import certify_threshold, compute_threshold, expand_prec_tree, square_forest
from src.errors import BudgetExceeded, GraphBurnError, NoWitnessInBudget
from src.graph import parse_graph_spec
from src.pathforest import decide, exceptional_clause, predict
from src.solver import burning_number, is_m_burnable
from src.spider import decide_double_spider, head_deadline_witness
from src.utils import VERSION, Settings, get_env_variable

load_dotenv()

logger = logging.getLogger(__name__)

settings = Settings.from_env()
REQUEST_TIMEOUT = float(get_env_variable("GRAPHBURN_REQUEST_TIMEOUT", 30.0))
thread_pool = ThreadPoolExecutor(max_workers=int(get_env_variable("GRAPHBURN_WORKERS", 3)))
cache = DeficiencyCache(settings.cache_path)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Release the worker threads on shutdown."""
    yield
    thread_pool.shutdown(wait=False, cancel_futures=True)


app = FastAPI(
    title="Graph Burning API",
    description="Exact graph burning decisions for graphs, path forests and double spiders",
    version=VERSION,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


async def run_search(fn, *args, **kwargs):
    """Run a blocking search in the thread pool under the request timeout."""
    loop = asyncio.get_running_loop()
    start_time = time.time()
    try:
        result = await asyncio.wait_for(
            loop.run_in_executor(thread_pool, partial(fn, *args, **kwargs)),
            timeout=REQUEST_TIMEOUT,
        )
    except asyncio.TimeoutError as e:
        raise HTTPException(status_code=503, detail="search timed out") from e
    except (BudgetExceeded, NoWitnessInBudget) as e:
        raise HTTPException(status_code=503, detail=f"inconclusive: {e!s}") from e
    except (GraphBurnError, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e)) from e
    return result, time.time() - start_time


def request_budget() -> SearchBudget:
    return SearchBudget(nodes=settings.node_budget, seconds=REQUEST_TIMEOUT)


def request_forest(lengths: list[int]) -> PathForest:
    try:
        return PathForest(lengths=tuple(lengths))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e


@app.post("/burn")
async def burn(request: QueryBurn):
    """
    Burning number of a graph spec, or its m-burnability when m is given.
    """
    try:
        g = parse_graph_spec(request.graph)
    except GraphBurnError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e

    if request.m is None:
        decision, elapsed = await run_search(burning_number, g, request_budget())
        content = {"graph": request.graph, "burning_number": decision.m}
    else:
        decision, elapsed = await run_search(is_m_burnable, g, request.m, request_budget())
        content = {"graph": request.graph, "m": request.m, "burnable": decision.burnable}
    content["witness"] = list(decision.witness.sources) if decision.witness else None
    content["processing_time"] = elapsed
    return JSONResponse(content=content)


@app.post("/path-forest/decide")
async def path_forest_decide(request: QueryPathForest):
    """Exact m-burnability of a path forest with a radii assignment when burnable."""
    forest = request_forest(request.lengths)
    decision, elapsed = await run_search(decide, forest, request.m, request_budget())
    n = forest.path_count
    clause = exceptional_clause(forest, request.m).value if 2 <= n <= request.m else None
    assignment = decision.assignment
    return JSONResponse(
        content={
            "forest": list(forest.lengths),
            "m": request.m,
            "burnable": decision.burnable,
            "clause": clause,
            "assignment": [list(part) for part in assignment.sets] if assignment else None,
            "processing_time": elapsed,
        }
    )


@app.post("/path-forest/predict")
async def path_forest_predict(request: QueryPathForest):
    """Which known sufficient condition, if any, guarantees m-burnability."""
    forest = request_forest(request.lengths)
    prediction = predict(forest, request.m)
    return {"forest": list(forest.lengths), "m": request.m, "burnable_by": prediction.burnable_by}


@app.post("/double-spider/decide")
async def double_spider_decide(request: QueryDoubleSpider):
    try:
        spider = DoubleSpider(arms_a=tuple(request.arms_a), arms_b=tuple(request.arms_b))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e
    decision, elapsed = await run_search(
        decide_double_spider, spider, request.m, request_budget(), settings.witness_max_order
    )
    content = {
        "spider": str(spider),
        "m": request.m,
        "burnable": decision.burnable,
        "reason": decision.reason,
        "witness": list(decision.witness.sources) if decision.witness else None,
    }
    if request.witness:
        deadline, extra = await run_search(head_deadline_witness, spider, request.m, request_budget())
        content["deadline_witness"] = list(deadline.sequence.sources)
        content["rounds_after_heads"] = deadline.rounds_after_heads
        elapsed += extra
    content["processing_time"] = elapsed
    return JSONResponse(content=content)


@app.post("/chain")
async def chain(request: QueryChain):
    """Expand the extension tree below a deficient square-order forest."""
    try:
        root = square_forest(request.lengths)
    except GraphBurnError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e
    tree, elapsed = await run_search(
        expand_prec_tree,
        root,
        node_budget=request.node_budget or settings.chain_nodes,
        m_budget=request.max_m or settings.chain_max_m,
        budget=request_budget(),
        cache=cache,
    )
    return JSONResponse(content={**tree.model_dump(mode="json"), "processing_time": elapsed})


@app.post("/threshold")
async def threshold(request: QueryThreshold):
    """Certify one L for n paths, or scan upwards for the threshold when L is omitted."""
    if request.L is not None:
        result, elapsed = await run_search(
            certify_threshold,
            request.n,
            request.L,
            settings.chain_nodes,
            settings.chain_max_m,
            request_budget(),
            cache,
        )
    else:
        result, elapsed = await run_search(
            compute_threshold,
            request.n,
            settings.chain_nodes,
            settings.chain_max_m,
            request_budget(),
            cache,
        )
    return JSONResponse(content={**result.model_dump(mode="json"), "processing_time": elapsed})


@app.get("/health")
async def health_check():
    """
    Health check endpoint
    """
    return {
        "status": "healthy",
        "version": VERSION,
        "cached_verdicts": len(cache),
        "thread_pool_info": {
            "max_workers": thread_pool._max_workers,
            "queued_tasks": thread_pool._work_queue.qsize(),
        },
    }


if __name__ == "__main__":
    import uvicorn

    logging.basicConfig(level=logging.INFO)
    uvicorn.run("main:app", host="0.0.0.0", port=8000, reload=True)
