"""Simulation laboratory for a classical-quantum hash.

Small key sets over Z_N drive an amplitude-form hash: a message maps to
a superposition whose branch phases are the scaled products key*message.
The package measures how biased a key set is, prepares the hash states
both analytically and as rotation circuits, compares states with SWAP
and uncompute-style tests, sets the construction against linear-code
fingerprinting, and runs a one-bit signature protocol on top.
"""

from .bias import (
    BiasProfile,
    KeySet,
    KeySetFile,
    KeySetFormatError,
    bias_profile,
    fourier_component,
    fourier_components,
    hash_inner_product,
    load_keyset,
    padded_branch_count,
    padded_delta_squared,
    save_keyset,
)
from .fingerprint import (
    CodeFormatError,
    LinearCode,
    encode,
    fingerprint_inner_product,
    fingerprint_resistance,
    fingerprint_reverse_test,
    fingerprint_state,
    load_code,
    random_linear_code,
    save_code,
)
from .keyset import (
    OBJECTIVES,
    SearchConfig,
    SearchOutcome,
    bundled_table_dir,
    ga_search,
    lemma_size,
    load_table_fixtures,
    sample_random_keyset,
)
from .qhash import (
    CircuitDescription,
    ControlledRotation,
    Hadamard,
    HashParams,
    PrepareUniform,
    ReverseTestResult,
    build_hash_circuit,
    dump_circuit,
    hash_state,
    message_bits,
    reverse_test,
    reverse_test_accept_probability,
    reverse_test_shots,
    simulate_circuit,
    uncompute_hash,
)
from .qsim import (
    MAX_QUBITS,
    MeasurementRecord,
    StateVector,
    TestCounts,
    basis_state,
    dump_state,
    inner_product,
    load_state,
    make_rng,
    measure_all,
    repeated_test,
    sample_outcomes,
    swap_test,
    swap_test_accept_probability,
)
from .signature import (
    ForgeryReport,
    ProtocolParams,
    SignatureKeyPair,
    forgery_experiment,
    forgery_prediction,
    keygen,
    sign,
    sign_message,
    verify,
    verify_message,
)

__all__ = [
    "BiasProfile",
    "CircuitDescription",
    "CodeFormatError",
    "ControlledRotation",
    "ForgeryReport",
    "Hadamard",
    "HashParams",
    "KeySet",
    "KeySetFile",
    "KeySetFormatError",
    "LinearCode",
    "MAX_QUBITS",
    "MeasurementRecord",
    "OBJECTIVES",
    "PrepareUniform",
    "ProtocolParams",
    "ReverseTestResult",
    "SearchConfig",
    "SearchOutcome",
    "SignatureKeyPair",
    "StateVector",
    "TestCounts",
    "basis_state",
    "bias_profile",
    "build_hash_circuit",
    "bundled_table_dir",
    "dump_circuit",
    "dump_state",
    "encode",
    "fingerprint_inner_product",
    "fingerprint_resistance",
    "fingerprint_reverse_test",
    "fingerprint_state",
    "forgery_experiment",
    "forgery_prediction",
    "fourier_component",
    "fourier_components",
    "ga_search",
    "hash_inner_product",
    "hash_state",
    "inner_product",
    "keygen",
    "lemma_size",
    "load_code",
    "load_keyset",
    "load_state",
    "load_table_fixtures",
    "make_rng",
    "measure_all",
    "message_bits",
    "padded_branch_count",
    "padded_delta_squared",
    "random_linear_code",
    "repeated_test",
    "reverse_test",
    "reverse_test_accept_probability",
    "reverse_test_shots",
    "sample_outcomes",
    "sample_random_keyset",
    "save_code",
    "save_keyset",
    "sign",
    "sign_message",
    "simulate_circuit",
    "swap_test",
    "swap_test_accept_probability",
    "uncompute_hash",
    "verify",
    "verify_message",
]
