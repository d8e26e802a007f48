from .connectivity import (
    AOSA,
    ARCHITECTURES,
    DAOSA,
    FC,
    WSMS,
    ConnectivityMask,
    DeviceCensus,
    SwitchNetwork,
    connectivity,
    device_census,
    subarray_of_antennas,
    wsms_chain_assignment,
)
from .devices import PHASE_SHIFTER, TTD, PhaseDevice, phase_response, phase_responses, quantize_delays
from .beamformer import HybridBeamformer, normalize_digital, unit_phase
