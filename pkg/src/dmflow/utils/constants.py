"""
Scenario defaults, experiment names and output layout.

The reference scenario is a 17-element, 7-carrier symmetrical FDA at 10 GHz serving three Bobs.
"""

# Array and waveform
DEFAULT_F0_HZ = 10e9
DEFAULT_DELTA_F_HZ = 2e3
DEFAULT_N_ELEMENTS = 17
DEFAULT_CARRIERS_PER_ELEMENT = 7
DEFAULT_P = 1.0
DEFAULT_T_OBS_S = 0.0

# Powers
DEFAULT_PS = 1.0
DEFAULT_SNR_DB = 10.0
DEFAULT_BETA1 = 0.9

# WFRFT
DEFAULT_MV = (1, 2, 3, 4)
DEFAULT_NV = (5, 6, 7, 8)
DEFAULT_COOP_ALPHA = 0.5

DEFAULT_BOBS = (
    {"range_km": 150.0, "angle_deg": 50.0, "modulation": "bpsk", "alpha": 0.5, "q": 3},
    {"range_km": 180.0, "angle_deg": -40.0, "modulation": "qpsk", "alpha": 1.0, "q": 4},
    {"range_km": 260.0, "angle_deg": 0.0, "modulation": "8psk", "alpha": 1.5, "q": 5},
)

# Eve 1 sits exactly on Bob 1.
REFERENCE_EVES = (
    {"range_km": 150.0, "angle_deg": 50.0},
    {"range_km": 220.0, "angle_deg": -20.0},
)

RANDOM9_EVES = (
    {"range_km": 259.0, "angle_deg": 107.0},
    {"range_km": 221.0, "angle_deg": -106.0},
    {"range_km": 298.0, "angle_deg": -138.0},
    {"range_km": 157.0, "angle_deg": 41.0},
    {"range_km": 159.0, "angle_deg": -69.0},
    {"range_km": 182.0, "angle_deg": -34.0},
    {"range_km": 247.0, "angle_deg": 8.0},
    {"range_km": 229.0, "angle_deg": 1.0},
    {"range_km": 188.0, "angle_deg": 10.0},
)

EVE_SETS = {
    "reference": REFERENCE_EVES,
    "random9": RANDOM9_EVES,
    "reference+random9": REFERENCE_EVES + RANDOM9_EVES,
}

MODULATION_ORDERS = {"bpsk": 2, "qpsk": 4, "8psk": 8}

DEFAULT_COND_LIMIT = 1e8

# Experiments
BER_VS_SNR = "ber_vs_snr"
BER_VS_ANGLE = "ber_vs_angle"
BER_VS_RANGE = "ber_vs_range"
SECRECY_VS_SNR = "secrecy_vs_snr"
SECRECY_MAP = "secrecy_map"
ROBUSTNESS_LOCATION = "robustness_location"
ROBUSTNESS_ALPHA = "robustness_alpha"
PROPERTY_SUITE = "property_suite"
POWER_VS_RATE = "power_vs_rate"

EXPERIMENTS = (
    BER_VS_SNR,
    BER_VS_ANGLE,
    BER_VS_RANGE,
    SECRECY_VS_SNR,
    SECRECY_MAP,
    ROBUSTNESS_LOCATION,
    ROBUSTNESS_ALPHA,
    PROPERTY_SUITE,
    POWER_VS_RATE,
)

# Schemes
WFRFT_COOP = "wfrft_coop"
WFRFT_INDE = "wfrft_inde"
AN_DM = "an_dm"
SCHEMES = (WFRFT_COOP, WFRFT_INDE, AN_DM)
WFRFT_SCHEMES = (WFRFT_COOP, WFRFT_INDE)

WITH_KEY = "with_key"
WITHOUT_KEY = "without_key"
PROBE_MODES = (WITH_KEY, WITHOUT_KEY)

CSV_COLUMNS = ("experiment", "scheme", "param1_name", "param1", "param2_name", "param2", "metric", "value", "n", "ci95")

# Exit codes of the `sim` command
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NONCONVERGENCE = 3
