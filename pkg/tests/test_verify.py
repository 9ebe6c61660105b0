"""The verifier itself: exact, randomized, and exhaustive modes."""

import numpy as np
import pytest

from conftest import mat
from sumnet.codes import NetworkCode, build_scalar_code, build_transfer_code, lift_code
from sumnet.gf import PrimeField
from sumnet.incidence import from_graph
from sumnet.instances import reference_code
from sumnet.network import build_sum_network
from sumnet.verify import (
    exhaustive_oracle,
    render_report,
    verify_exact,
    verify_random,
)

K2_MATRIX = mat([[1], [1]])
FIG4A = from_graph(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])


def corrupt_encoder(code: NetworkCode, enc_index: int, row: int) -> NetworkCode:
    encoders = [e.copy() for e in code.encoders]
    encoders[enc_index][row, :] = 0
    return NetworkCode(
        code.m, code.n, code.p, code.alpha, code.rows, code.cols,
        tuple(encoders), code.decoders,
    )


def test_reference_code_verifies_both_chars():
    net = build_sum_network(K2_MATRIX)
    for p in (2, 3):
        report = verify_exact(net, reference_code("k2-normal", p))
        assert report.ok and report.mode == "exact-basis"
        assert report.trials_or_dim == 2 * 3


def test_corrupted_component_fails_at_block_terminal():
    net = build_sum_network(K2_MATRIX)
    bad = corrupt_encoder(reference_code("k2-normal", 2), 0, 2)
    report = verify_exact(net, bad)
    assert not report.ok
    assert [t for t, _ in report.failures] == ["t_B1"]
    # the witness pins a message whose decode breaks
    (terminal, witness), = report.failures
    assert witness == {"s_B1": (1, 0)}


def test_fig4a_reference_verifies():
    net = build_sum_network(mat([[1, 0, 0, 1, 1], [1, 1, 0, 0, 0],
                                 [0, 1, 1, 0, 1], [0, 0, 1, 1, 0]]))
    assert verify_exact(net, reference_code("fig4a-normal", 2)).ok


def test_exhaustive_oracle_k2():
    net = build_sum_network(K2_MATRIX)
    code = reference_code("k2-normal", 2)
    report = exhaustive_oracle(net, code, limit=64)
    assert report.ok and report.trials_or_dim == 64


def test_exhaustive_counts_failures_exactly():
    net = build_sum_network(K2_MATRIX)
    bad = corrupt_encoder(reference_code("k2-normal", 2), 0, 2)
    report = exhaustive_oracle(net, bad, limit=64)
    assert not report.ok
    # exactly the messages with a nonzero first edge-message component fail
    assert len(report.failures) == 32
    assert all(t == "t_B1" for t, _ in report.failures)


def test_exhaustive_size_refusal():
    net = build_sum_network(K2_MATRIX)
    code = reference_code("k2-normal", 2)
    with pytest.raises(ValueError, match="exceed the limit"):
        exhaustive_oracle(net, code, limit=63)


def test_exact_agrees_with_exhaustive():
    net = build_sum_network(K2_MATRIX)
    for p in (2, 3):
        code = build_transfer_code(K2_MATRIX, PrimeField(p))
        limit = p ** (code.m * 3)
        assert verify_exact(net, code).ok == exhaustive_oracle(net, code, limit).ok
        bad = corrupt_encoder(code, 1, 0)
        assert verify_exact(net, bad).ok == exhaustive_oracle(net, bad, limit).ok is False


def test_exact_agrees_with_exhaustive_scalar_transpose():
    a = mat([[1, 1]])
    net = build_sum_network(a)
    code = build_scalar_code(a, PrimeField(2))
    assert verify_exact(net, code).ok
    assert exhaustive_oracle(net, code, limit=8).ok


def test_random_matches_exact_on_valid_codes():
    net = build_sum_network(K2_MATRIX)
    code = reference_code("k2-normal", 2)
    report = verify_random(net, code, trials=1000, seed=1)
    assert report.ok and report.trials_or_dim == 1000 and report.seed == 1


def test_random_finds_corruption():
    net = build_sum_network(K2_MATRIX)
    bad = corrupt_encoder(reference_code("k2-normal", 2), 0, 2)
    report = verify_random(net, bad, trials=64, seed=7)
    assert not report.ok
    assert report.failures  # carries witnesses
    terminal, witness = report.failures[0]
    assert terminal == "t_B1" and witness


def test_random_zero_trials_vacuous():
    net = build_sum_network(K2_MATRIX)
    report = verify_random(net, reference_code("k2-normal", 2), trials=0, seed=1)
    assert report.ok and report.trials_or_dim == 0


def test_random_reproducible():
    net = build_sum_network(K2_MATRIX)
    bad = corrupt_encoder(reference_code("k2-normal", 2), 0, 2)
    a = verify_random(net, bad, trials=20, seed=42)
    b = verify_random(net, bad, trials=20, seed=42)
    assert a == b


def test_dimension_mismatch_rejected():
    net = build_sum_network(K2_MATRIX)
    code = build_transfer_code(FIG4A.matrix, PrimeField(2))
    with pytest.raises(ValueError, match="code is for"):
        verify_exact(net, code)
    k2_code = build_transfer_code(K2_MATRIX, PrimeField(2))
    net2 = build_sum_network(K2_MATRIX, alpha=2)
    with pytest.raises(ValueError, match="alpha"):
        verify_exact(net2, k2_code)


def test_nonlocal_encoder_rejected():
    net = build_sum_network(K2_MATRIX)
    code = build_transfer_code(K2_MATRIX, PrimeField(2))
    encoders = [e.copy() for e in code.encoders]
    # make e1 read the message of s_p2, which does not feed it
    encoders[0][0, 2] = 1
    bad = NetworkCode(code.m, code.n, code.p, code.alpha, code.rows, code.cols,
                      tuple(encoders), code.decoders)
    with pytest.raises(ValueError, match="outside the sources"):
        verify_exact(net, bad)


def test_decoder_with_wrong_inputs_rejected():
    from sumnet.codes import Decoder

    net = build_sum_network(K2_MATRIX)
    code = build_transfer_code(K2_MATRIX, PrimeField(2))
    decoders = dict(code.decoders)
    old = decoders["t_p1"]
    # claim a direct edge from s_B1, which the network does not provide here
    decoders["t_p1"] = Decoder(("e1", "s_B1"), old.matrix)
    bad = NetworkCode(code.m, code.n, code.p, code.alpha, code.rows, code.cols,
                      code.encoders, decoders)
    with pytest.raises(ValueError, match="expected"):
        verify_exact(net, bad)


def test_lifted_code_verifies_and_simulates():
    code = lift_code(build_transfer_code(K2_MATRIX, PrimeField(2)), 2)
    net = build_sum_network(K2_MATRIX, alpha=2)
    assert verify_exact(net, code).ok
    assert verify_random(net, code, trials=200, seed=3).ok
    assert exhaustive_oracle(net, code, limit=5000).ok  # 2^12 tuples


def test_render_report_stable():
    net = build_sum_network(K2_MATRIX)
    code = reference_code("k2-normal", 2)
    text = render_report(verify_exact(net, code))
    assert text.splitlines()[0] == "mode exact-basis"
    assert "ok yes" in text
    bad = corrupt_encoder(code, 0, 2)
    text = render_report(verify_exact(net, bad))
    assert "ok no" in text and "t_B1" in text
