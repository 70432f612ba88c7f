import io

import orjson
import pandas as pd

from models.schemas import Report, VerificationReport

# fixed CSV columns per command
CSV_COLUMNS = {
    "burn": ["graph", "m", "burnable", "burning_number", "witness"],
    "pf": ["forest", "m", "burnable", "clause", "prediction", "assignment"],
    "verify": ["instance", "m", "expected", "actual"],
    "ds": ["spider", "m", "burnable", "reason", "witness", "rounds_after_heads"],
    "chain": ["forest", "m", "status", "children"],
    "ln": ["n", "L", "verdict", "witness", "threshold_m"],
}


def verification_rows(report: VerificationReport) -> list[dict]:
    return [violation.model_dump() for violation in report.violations]


def to_json(report: Report) -> bytes:
    return orjson.dumps(
        report.model_dump(mode="json"), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
    )


def to_csv(report: Report, table: str) -> str:
    df = pd.DataFrame(report.rows, columns=CSV_COLUMNS[table])
    buffer = io.StringIO()
    df.to_csv(buffer, index=False)
    return buffer.getvalue()


def to_text(report: Report) -> str:
    lines = [f"{key}: {value}" for key, value in sorted(report.result.items())]
    if report.status != "completed":
        lines.append(f"status: {report.status}")
    return "\n".join(lines)


def render(report: Report, table: str) -> str:
    fmt = report.config.output_format
    if fmt == "json":
        return to_json(report).decode()
    if fmt == "csv":
        return to_csv(report, table)
    return to_text(report)


def save_evidence(report: Report, path: str):
    with open(path, "wb") as f:
        f.write(to_json(report))
