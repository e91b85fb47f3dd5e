"""Generic multicarrier modulator built from structured linear operators."""

__version__ = "0.1.0"

from .config import ConfigError, Extension, FilterStage, Layout, ModulatorConfig, validate
from .engine import (
    DataFrame,
    StageSignal,
    Waveform,
    assemble_frames,
    composite_matrix,
    frame_input,
    modulate,
    modulate_frame,
    modulate_frames,
    multiplex,
    stage_filter,
)
from .presets import (
    Preset,
    oqam_map,
    oqam_unmap,
    preset_fbmc_oqam,
    preset_ofdm,
    preset_scfdma,
)

__all__ = [
    "ConfigError", "Extension", "FilterStage", "Layout", "ModulatorConfig", "validate",
    "DataFrame", "StageSignal", "Waveform", "assemble_frames", "composite_matrix",
    "frame_input", "modulate", "modulate_frame", "modulate_frames", "multiplex",
    "stage_filter", "Preset", "oqam_map", "oqam_unmap", "preset_fbmc_oqam",
    "preset_ofdm", "preset_scfdma",
]
