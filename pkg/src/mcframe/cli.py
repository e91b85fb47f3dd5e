"""Batch front-end: ``mcframe --preset cp-ofdm --prbs-seed 7 --symbols 1280 --out ofdm.iq``.

Writes ``OUT`` (IQ samples), ``OUT.json`` (metadata sidecar) and, on request,
``OUT.psd.csv``, ``OUT.papr.json`` and ``OUT.matrix.npy``.
Exit status: 0 success, 1 configuration/validation error, 2 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, engine, iq, metrics, oracles
from .config import ConfigError, ModulatorConfig, from_document, validate
from .presets import PRESETS, InputMapper, Preset

MATRIX_LIMIT = 20_000_000  # complex entries


@dataclass
class RunManifest:
    out: Path
    preset: Optional[str] = None
    config_path: Optional[Path] = None
    data_path: Optional[Path] = None
    prbs_seed: Optional[int] = None
    constellation: str = "qpsk"
    n_symbols: Optional[int] = None
    metrics: tuple = ()
    emit_matrix: bool = False
    oracle_check: bool = False
    psd_segment: int = 256
    tool_version: str = __version__

    def __post_init__(self):
        if (self.preset is None) == (self.config_path is None):
            raise ValueError("exactly one of --preset / --config is required")
        if (self.data_path is None) == (self.prbs_seed is None):
            raise ValueError("exactly one of --data / --prbs-seed is required")
        if self.prbs_seed is not None and self.n_symbols is None:
            raise ValueError("--prbs-seed needs --symbols")
        unknown = set(self.metrics) - {"psd", "papr"}
        if unknown:
            raise ValueError(f"unknown metrics: {sorted(unknown)}")


def parse_config(document) -> ModulatorConfig:
    """Parse and validate a flat JSON configuration (dict, text or path)."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = Path(document).read_text()
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"malformed JSON: {exc}"]) from None
    config = from_document(document)
    validate(config)
    return config


def shipped_config(name: str) -> Path:
    ref = resources.files("mcframe") / "data" / "configs" / f"{name}.json"
    with resources.as_file(ref) as p:
        return Path(p)


def _load_preset(m: RunManifest) -> Preset:
    if m.preset is not None:
        if m.preset not in PRESETS:
            raise ConfigError([f"unknown preset {m.preset!r}; choose from {sorted(PRESETS)}"])
        return PRESETS[m.preset]()
    return Preset(m.config_path.stem, parse_config(m.config_path))


def _load_symbols(m: RunManifest) -> np.ndarray:
    if m.data_path is not None:
        return iq.read_iq(m.data_path)
    return iq.prbs_symbols(m.prbs_seed, m.n_symbols, m.constellation)


def _oracle(preset: Preset, frames, wave: engine.Waveform) -> oracles.OracleReport:
    cfg = preset.config
    if preset.name == "cp-ofdm" and preset.config == PRESETS["cp-ofdm"]().config:
        ref = np.concatenate([oracles.ofdm_reference(f.values[0, 0], cp=32) for f in frames])
        return oracles.compare(wave.output(0), ref, 1e-10)
    if preset.name == "sc-fdma":
        ref = np.concatenate([oracles.scfdma_reference(f.values[0, 0]) for f in frames])
        return oracles.compare(wave.output(0), ref, 1e-9)
    ref = oracles.scalar_reference(cfg, frames)
    return oracles.compare(wave.samples, ref, 1e-10)


def run(m: RunManifest, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        preset = _load_preset(m)
        layout = validate(preset.config)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return 1
    symbols = _load_symbols(m)
    frames = preset.frames(symbols)
    if not frames:
        print("error: no input symbols", file=sys.stderr)
        return 1
    wave = engine.modulate_frames(frames, preset.config)

    out = Path(m.out)
    iq.write_iq(out, wave.samples.ravel())
    meta = {
        "format": "complex128 little-endian, interleaved I/Q, no header",
        "outputs": wave.n_outputs,
        "samples_per_output": len(wave),
        "frames": wave.n_frames,
        "frame_length": wave.frame_length,
        "stride": wave.stride,
        "rate_multiplier": str(layout.rate),
        "config_digest": wave.config_digest,
        "config_source": m.preset or str(m.config_path),
        "data_source": str(m.data_path) if m.data_path else
        {"prbs_seed": m.prbs_seed, "constellation": m.constellation, "symbols": m.n_symbols},
        "tool_version": m.tool_version,
    }
    iq.write_sidecar(out.with_name(out.name + ".json"), meta)

    if "psd" in m.metrics:
        f, db = metrics.psd(wave.output(0), min(m.psd_segment, len(wave)))
        metrics.write_psd_csv(out.with_name(out.name + ".psd.csv"), f, db)
    if "papr" in m.metrics:
        r = metrics.papr(wave.samples)
        iq.write_sidecar(out.with_name(out.name + ".papr.json"), {"linear": r.linear, "db": r.db})
    if m.emit_matrix:
        size = preset.config.n_outputs * layout.n_double_prime * preset.config.frame_capacity
        if size > MATRIX_LIMIT:
            print(f"error: composite matrix would have {size} entries (limit {MATRIX_LIMIT})",
                  file=sys.stderr)
            return 1
        np.save(out.with_name(out.name + ".matrix.npy"), engine.composite_matrix(preset.config))
    print(f"{wave.n_frames} frames, {len(wave)} samples -> {out}", file=stdout)

    if m.oracle_check:
        report = _oracle(preset, frames, wave)
        print(report, file=stdout)
        if not report.passed:
            return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcframe", description="Generic multicarrier modulator.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--config", type=Path, help="flat JSON configuration file")
    data = p.add_mutually_exclusive_group(required=True)
    data.add_argument("--data", type=Path, help="complex symbols, interleaved little-endian float64")
    data.add_argument("--prbs-seed", type=int)
    p.add_argument("--constellation", choices=("qpsk", "16qam"), default="qpsk")
    p.add_argument("--symbols", type=int, help="number of generated symbols")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--metrics", default="", help="comma-separated: psd,papr")
    p.add_argument("--psd-segment", type=int, default=256)
    p.add_argument("--emit-matrix", action="store_true")
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--version", action="version", version=__version__)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = RunManifest(
            out=args.out,
            preset=args.preset,
            config_path=args.config,
            data_path=args.data,
            prbs_seed=args.prbs_seed,
            constellation=args.constellation,
            n_symbols=args.symbols,
            metrics=tuple(s for s in args.metrics.split(",") if s),
            emit_matrix=args.emit_matrix,
            oracle_check=args.oracle_check,
            psd_segment=args.psd_segment,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
