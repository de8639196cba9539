"""Spectral-data ingestion: LMFDB web API client with local cache, offline
fixtures, normalization calibration against the trace formula."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .config import DEFAULT, PrecisionConfig
from .errors import (ConformanceError, DataError, DegenerateError,
                     NetworkError, SchemaError)
from .moments import (MaassForm, SpectralDataset, eisenstein_term,
                      geometric_side, hecke_identity_residuals)
from .testfn import h_eval

FIXTURE_HEADER = "#symsq-fixture-v1"
DEFAULT_BASE_URL = "https://www.lmfdb.org/api/maass_rigor"
HECKE_TOL = 1e-6


@dataclass
class RawMaassRecord:
    """One upstream spectral record, Hecke-normalized coefficients."""

    label: str
    spectral_parameter: float
    symmetry: str  # "even" | "odd"
    coefficients: List[float]  # a(1), a(2), ... (a(1) = 1)
    precision_digits: int
    fetched_at: str
    normalization_weight: float = 1.0

    def __post_init__(self):
        if self.spectral_parameter <= 0:
            raise SchemaError(f"{self.label}: spectral parameter must be positive")
        if not self.coefficients or abs(self.coefficients[0] - 1.0) > 1e-9:
            raise SchemaError(f"{self.label}: coefficients[1] must be 1")
        if self.symmetry not in ("even", "odd"):
            raise SchemaError(f"{self.label}: bad symmetry {self.symmetry!r}")

    def to_json(self) -> str:
        return json.dumps({
            "label": self.label,
            "spectral_parameter": self.spectral_parameter,
            "symmetry": self.symmetry,
            "coefficients": self.coefficients,
            "precision_digits": self.precision_digits,
            "fetched_at": self.fetched_at,
            "normalization_weight": self.normalization_weight,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "RawMaassRecord":
        try:
            d = json.loads(line)
            return cls(
                label=d["label"],
                spectral_parameter=float(d["spectral_parameter"]),
                symmetry=d["symmetry"],
                coefficients=[float(v) for v in d["coefficients"]],
                precision_digits=int(d["precision_digits"]),
                fetched_at=d["fetched_at"],
                normalization_weight=float(d.get("normalization_weight", 1.0)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad record line: {exc}") from exc


@dataclass
class CalibrationRecord:
    constant: float
    calibration_pair: Tuple[int, int]
    residual_at_calibration: float
    validation_pairs: List[Tuple[Tuple[int, int], float]] = field(default_factory=list)

    def __post_init__(self):
        cal = tuple(self.calibration_pair)
        for (pair, _res) in self.validation_pairs:
            if tuple(pair) == cal:
                raise DataError("validation pairs must be disjoint from calibration")


# ----------------------------------------------------------------- storage

def cache_dir() -> Path:
    env = os.environ.get("SYMSQ_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "symsq"


def write_records(path: Path, records: Sequence[RawMaassRecord], meta: Optional[dict] = None):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(FIXTURE_HEADER + "\n")
        if meta is not None:
            fh.write("#meta " + json.dumps(meta, sort_keys=True) + "\n")
        for rec in records:
            fh.write(rec.to_json() + "\n")


def read_records(path: Path) -> Tuple[List[RawMaassRecord], dict]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != FIXTURE_HEADER:
            raise SchemaError(f"{path}: missing fixture header {FIXTURE_HEADER!r}")
        meta: dict = {}
        records = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#meta "):
                meta = json.loads(line[len("#meta "):])
                continue
            if line.startswith("#"):
                continue
            records.append(RawMaassRecord.from_json(line))
    return records, meta


def builtin_fixture_path(name: str = "maass_level1_t25.jsonl") -> Path:
    from importlib.resources import files

    return Path(str(files("symsq") / "fixtures" / name))


def load_fixture(name: str = "maass_level1_t25.jsonl"):
    return read_records(builtin_fixture_path(name))


# ------------------------------------------------------------------- fetch

def fetch_forms(max_t: float, n_coeffs: int, base_url: Optional[str] = None,
                session=None, max_retries: int = 3) -> List[RawMaassRecord]:
    """All level-1 records with spectral parameter <= max_t from the web
    API, persisted to the cache before returning. Subsequent calls with
    the same arguments are served byte-identically from the cache."""
    if max_t > 40.0:
        raise DataError("desk scale: max_t <= 40")
    base = base_url or os.environ.get("SYMSQ_LMFDB_URL", DEFAULT_BASE_URL)
    cpath = cache_dir() / f"maass_level1_t{max_t:g}_n{n_coeffs}.jsonl"
    if cpath.exists():
        return read_records(cpath)[0]

    import requests

    sess = session or requests.Session()
    records: List[RawMaassRecord] = []
    url = (f"{base}/?_format=json&level=1"
           f"&spectral_parameter=le{max_t:g}&_fields=maass_label,"
           f"spectral_parameter,symmetry,coefficients&_sort=spectral_parameter")
    fetched_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    while url:
        payload = None
        for attempt in range(max_retries):
            try:
                resp = sess.get(url, timeout=30)
                if resp.status_code != 200:
                    raise NetworkError(f"HTTP {resp.status_code} from {url}")
                payload = resp.json()
                break
            except NetworkError:
                raise
            except Exception as exc:  # connection errors, JSON decode
                if attempt == max_retries - 1:
                    raise NetworkError(f"fetch failed after {max_retries} tries: {exc}")
                time.sleep(0.5 * 2**attempt)
        if not isinstance(payload, dict) or "data" not in payload:
            raise SchemaError(f"unexpected payload shape: {str(payload)[:200]}")
        for row in payload["data"]:
            try:
                sym = row["symmetry"]
                if isinstance(sym, int):
                    sym = "even" if sym == 1 else "odd"
                coeffs = [float(c) for c in row["coefficients"]][:n_coeffs]
                records.append(RawMaassRecord(
                    label=str(row.get("maass_label", row.get("label", "?"))),
                    spectral_parameter=float(row["spectral_parameter"]),
                    symmetry=sym,
                    coefficients=coeffs,
                    precision_digits=int(row.get("precision", 9)),
                    fetched_at=fetched_at,
                ))
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(
                    f"upstream format drift in row {json.dumps(row)[:300]}: {exc}") from exc
        nxt = payload.get("next", "")
        url = nxt if nxt and nxt != url else None
    records.sort(key=lambda r: r.spectral_parameter)
    write_records(cpath, records, meta={"source": base, "max_t": max_t})
    return records


# ------------------------------------------------------------ dataset build

def build_dataset(records: Sequence[RawMaassRecord],
                  calibration: Optional[CalibrationRecord] = None,
                  completeness_claim: Optional[float] = None) -> SpectralDataset:
    """Normalize records into a SpectralDataset; every form must pass the
    Hecke-identity gate at 1e-6."""
    constant = calibration.constant if calibration else 1.0
    failing = []
    forms = []
    for rec in sorted(records, key=lambda r: r.spectral_parameter):
        hecke = {i + 1: c for i, c in enumerate(rec.coefficients)}
        res = hecke_identity_residuals(hecke, len(rec.coefficients))
        worst = max((abs(v) for (_, v) in res), default=0.0)
        if worst > HECKE_TOL:
            failing.append((rec.label, worst))
            continue
        forms.append(MaassForm(
            t=rec.spectral_parameter,
            alpha=constant * rec.normalization_weight,
            hecke=hecke,
            n_max=len(rec.coefficients),
            label=rec.label,
            parity=rec.symmetry,
        ))
    if failing:
        raise ConformanceError(
            "Hecke identity violated by: "
            + ", ".join(f"{lab} ({w:.2e})" for lab, w in failing),
            failing_labels=[lab for lab, _ in failing],
        )
    if not forms:
        return SpectralDataset([], 0.0, source="empty")
    cutoff = max(f.t for f in forms)
    if completeness_claim is not None:
        cutoff = min(cutoff, completeness_claim)
    return SpectralDataset(forms, cutoff, source="records")


def calibrate(ds_uncalibrated: SpectralDataset, h, pair: Tuple[int, int],
              c_max: int, cfg: PrecisionConfig = DEFAULT,
              validation_pairs: Sequence[Tuple[int, int]] = ((1, 2), (2, 2))) -> CalibrationRecord:
    """Choose the global constant so spectral + eisenstein = geometric at
    the calibration pair; residuals at the validation pairs recorded."""
    from .moments import kuznetsov_residual, lambda_extend

    m, n = pair
    geo = geometric_side(m, n, h, c_max, cfg)
    eis = eisenstein_term(m, n, h, cfg)
    target = geo.value - eis.value
    denom = 0.0
    for f in ds_uncalibrated.forms:
        hv = float(complex(h_eval(h, f.t)).real)
        denom += hv * f.alpha * lambda_extend(f, m) * lambda_extend(f, n)
    if abs(target) <= geo.error + eis.error:
        raise DegenerateError("geometric side indistinguishable from zero at "
                              f"{pair}; pick another calibration pair")
    if abs(denom) < 1e-300:
        raise DegenerateError("spectral sum vanishes at the calibration pair")
    constant = target / denom
    forms = [MaassForm(f.t, f.alpha * constant, f.hecke, f.n_max, f.label, f.parity)
             for f in ds_uncalibrated.forms]
    ds = SpectralDataset(forms, ds_uncalibrated.completeness_cutoff, ds_uncalibrated.source)
    cal_res = kuznetsov_residual(ds, m, n, h, c_max, cfg)
    validations = []
    for vp in validation_pairs:
        if tuple(vp) == tuple(pair):
            continue
        rep = kuznetsov_residual(ds, vp[0], vp[1], h, c_max, cfg)
        validations.append((tuple(vp), rep.residual))
    return CalibrationRecord(
        constant=float(constant),
        calibration_pair=(m, n),
        residual_at_calibration=cal_res.residual,
        validation_pairs=validations,
    )
