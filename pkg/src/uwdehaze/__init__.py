"""Underwater haze removal with a shifted-RGB dark channel prior."""

from .airlight import estimate_airlight
from .darkchannel import PriorMode, dark_channel, shift_rgb
from .formation import PsfParams, SceneSpec, synthesize
from .imgcore import ChannelTriple, DimensionError, ParameterError, from_8bit, to_8bit
from .pipeline import EnhancedResult, PipelineConfig, enhance_frame, enhance_sequence
from .restore import brighten, recover_radiance
from .transmission import RefineParams, apply_floor, estimate_transmission, refine_transmission
from .whitebalance import WbParams, lalphabeta_to_rgb, local_gray_world, rgb_to_lalphabeta

__version__ = "0.1.0"
