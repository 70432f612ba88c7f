import logging
import threading
from pathlib import Path

logger = logging.getLogger(__name__)

DEFICIENT = "deficient"
BURNABLE = "burnable"


class DeficiencyCache:
    """
    Append-only record of path-forest deficiency verdicts.

    One line per forest: `n;m;l1,l2,...;verdict`, lengths in nonincreasing
    order. Reads are served from memory; appends go through a lock.
    """

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self._verdicts: dict[tuple[int, tuple[int, ...]], bool] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        for line_number, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                n, m, lengths, verdict = line.split(";")
                key = (int(m), tuple(int(x) for x in lengths.split(",")))
                if len(key[1]) != int(n) or verdict not in (DEFICIENT, BURNABLE):
                    raise ValueError(line)
            except ValueError:
                logger.warning("skipping malformed cache line %d in %s", line_number, self.path)
                continue
            self._verdicts[key] = verdict == DEFICIENT
        logger.debug("loaded %d deficiency verdicts from %s", len(self._verdicts), self.path)

    def get(self, m: int, lengths: tuple[int, ...]) -> bool | None:
        return self._verdicts.get((m, lengths))

    def put(self, m: int, lengths: tuple[int, ...], deficient: bool):
        key = (m, lengths)
        with self._lock:
            if key in self._verdicts:
                return
            self._verdicts[key] = deficient
            if self.path is None:
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            verdict = DEFICIENT if deficient else BURNABLE
            with self.path.open("a") as f:
                f.write(f"{len(lengths)};{m};{','.join(map(str, lengths))};{verdict}\n")

    def __len__(self):
        return len(self._verdicts)
