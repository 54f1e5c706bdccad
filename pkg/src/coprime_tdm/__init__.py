"""Time-division-multiplexed co-prime sub-Nyquist sampling toolkit."""

from .diffsets import (
    CrossWeight, DifferenceSet, WeightFunction, bias_window, closed_form_z2_terms,
    cross_differences, cross_weight, self_differences, verify_z_relations,
    weight_brute_force, weight_closed_form_z2,
)
from .errors import (
    CoprimeTDMError, GridMismatch, GridResolution, InvalidParam, LagOutOfRange,
    NoFeasibleShift, NotCoprime, SlotCollision, TooFast, UndefinedSpectrum,
)
from .estimator import (
    AcquisitionRecord, CorrelationEstimate, SignalModel, acquire, assemble,
    correlogram_psd, estimate_autocorr, estimate_crosscorr,
)
from .grid import CoprimePair, SamplingPattern, TickGrid, make_coprime_pair, merge_patterns, rescale
from .patterns import (
    ExscaConfig, build_scheme, gen_exsca, gen_extended_x1, gen_extended_x2,
    gen_tdm_two_sampler_x2, gen_uniform,
)
from .scheduler import (
    AssignmentModel, SwitchSchedule, build_schedule, check_exsca_overlap,
    plan_assignment, replay, search_shift,
)

__version__ = "0.1.0"
