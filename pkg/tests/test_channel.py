import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from irwd import (
    ChannelGains,
    ChannelSpecError,
    PowerBudget,
    channel_spec_dict,
    load_channel_spec,
    parse_channel_spec,
    resolve_workers,
    sample,
    sample_all,
    sample_blocks,
    solve_af_gains,
)
from support import BUDGET_A, CHANNEL_A

ALPHA_A = solve_af_gains(CHANNEL_A)
PAIR_A = (ALPHA_A.alpha1, ALPHA_A.alpha2)


def test_gains_reject_non_finite():
    with pytest.raises(ValueError):
        ChannelGains(h11=math.nan, h12=0, h21=0, h22=1, hR1=0, hR2=0,
                     h1R_1=0, h1R_2=0, h2R_1=0, h2R_2=0)


def test_budget_guards():
    with pytest.raises(ValueError):
        PowerBudget(P=-1.0, P_R=1.0)
    with pytest.raises(ValueError):
        PowerBudget(P=1.0, P_R=-1.0)
    with pytest.raises(ValueError):
        PowerBudget(P=1.0, P_R=1.0, noise_var=0.0)
    assert PowerBudget(P=0.0, P_R=0.0).noise_var == 1.0


def test_fields_coerced_to_float():
    g = ChannelGains(h11=np.float64(1), h12=1, h21=1, h22=1, hR1=1, hR2=1,
                     h1R_1=1, h1R_2=2, h2R_1=2, h2R_2=1)
    assert type(g.h11) is float
    json.dumps(channel_spec_dict(g, PowerBudget(P=np.float64(1), P_R=1)))


def test_sample_deterministic():
    a = sample(CHANNEL_A, BUDGET_A, PAIR_A, 1000, 7)
    b = sample(CHANNEL_A, BUDGET_A, PAIR_A, 1000, 7)
    for name in ("x1", "x2", "zR", "z1", "z2", "yR", "xR1", "xR2", "y1", "y2"):
        assert np.array_equal(a.component(name), b.component(name))
    c = sample(CHANNEL_A, BUDGET_A, PAIR_A, 1000, 8)
    assert not np.array_equal(a.x1, c.x1)


def test_sample_reconstruction_bit_exact():
    blk = sample(CHANNEL_A, BUDGET_A, PAIR_A, 2000, 13)
    g = CHANNEL_A
    y1 = g.h11 * blk.x1 + g.h12 * blk.x2 + g.h1R_1 * blk.xR1 + g.h1R_2 * blk.xR2 + blk.z1
    y2 = g.h21 * blk.x1 + g.h22 * blk.x2 + g.h2R_1 * blk.xR1 + g.h2R_2 * blk.xR2 + blk.z2
    yR = g.hR1 * blk.x1 + g.hR2 * blk.x2 + blk.zR
    assert np.array_equal(y1, blk.y1)
    assert np.array_equal(y2, blk.y2)
    assert np.array_equal(yR, blk.yR)
    # scalar view reproduces the same floats
    s = blk[17]
    assert s.y1 == g.h11 * s.x1 + g.h12 * s.x2 + g.h1R_1 * s.xR1 + g.h1R_2 * s.xR2 + s.z1


def test_sample_moments_match_power():
    n = 200_000
    blk = sample(CHANNEL_A, PowerBudget(P=2.5, P_R=1.0), PAIR_A, n, 3)
    assert abs(blk.x1.var() - 2.5) < 0.05
    assert abs(blk.z1.var() - 1.0) < 0.02
    assert abs(np.mean(blk.x1 * blk.x2)) < 0.02


def test_sample_blocks_worker_independent():
    seq = sample_blocks(CHANNEL_A, BUDGET_A, PAIR_A, 9000, 5, 7, workers=1)
    par = sample_blocks(CHANNEL_A, BUDGET_A, PAIR_A, 9000, 5, 7, workers=4)
    assert len(seq) == len(par) == 7
    assert sum(len(b) for b in seq) == 9000
    for a, b in zip(seq, par):
        assert np.array_equal(a.y1, b.y1)


def test_sample_all_concatenates_block_streams():
    blocks = sample_blocks(CHANNEL_A, BUDGET_A, PAIR_A, 4000, 5, 4)
    merged = sample_all(CHANNEL_A, BUDGET_A, PAIR_A, 4000, 5, n_blocks=4)
    assert np.array_equal(np.concatenate([b.y2 for b in blocks]), merged.y2)


def test_resolve_workers_env_cap(monkeypatch):
    monkeypatch.setenv("IRWD_THREADS", "2")
    assert resolve_workers(None) == 2
    assert resolve_workers(8) == 2
    assert resolve_workers(1) == 1
    monkeypatch.delenv("IRWD_THREADS")
    assert resolve_workers(None) == 1
    assert resolve_workers(3) == 3


def test_sample_guards():
    with pytest.raises(ValueError):
        sample(CHANNEL_A, BUDGET_A, PAIR_A, 0, 1)
    with pytest.raises(ValueError):
        sample_blocks(CHANNEL_A, BUDGET_A, PAIR_A, 3, 1, n_blocks=5)


def test_spec_roundtrip(spec_a):
    gains, budget = load_channel_spec(spec_a)
    assert gains == CHANNEL_A
    assert budget == BUDGET_A


@pytest.mark.parametrize("field", ["h11", "hR2", "h1R", "h2R", "P", "PR"])
def test_spec_missing_field_named(spec_file, field):
    path = spec_file(CHANNEL_A, BUDGET_A, "broken.json", mutate=lambda o: o.pop(field))
    with pytest.raises(ChannelSpecError, match=field):
        load_channel_spec(path)


def test_spec_bad_shapes(spec_file):
    path = spec_file(CHANNEL_A, BUDGET_A, "short.json", mutate=lambda o: o.update(h1R=[1.0]))
    with pytest.raises(ChannelSpecError, match="h1R"):
        load_channel_spec(path)
    path = spec_file(CHANNEL_A, BUDGET_A, "text.json", mutate=lambda o: o.update(h11="big"))
    with pytest.raises(ChannelSpecError, match="h11"):
        load_channel_spec(path)
    with pytest.raises(ChannelSpecError):
        parse_channel_spec([1, 2, 3])


def test_spec_not_json(tmp_path):
    path = tmp_path / "nope.json"
    path.write_text("not json {")
    with pytest.raises(ChannelSpecError):
        load_channel_spec(str(path))
    with pytest.raises(ChannelSpecError):
        load_channel_spec(str(tmp_path / "missing.json"))


finite = st.floats(min_value=-50, max_value=50, allow_nan=False)


@given(vals=st.lists(finite, min_size=10, max_size=10),
       p=st.floats(min_value=0, max_value=50), pr=st.floats(min_value=0, max_value=50))
def test_spec_dict_roundtrip(vals, p, pr):
    g = ChannelGains(h11=vals[0], h12=vals[1], h21=vals[2], h22=vals[3],
                     hR1=vals[4], hR2=vals[5], h1R_1=vals[6], h1R_2=vals[7],
                     h2R_1=vals[8], h2R_2=vals[9])
    b = PowerBudget(P=p, P_R=pr)
    g2, b2 = parse_channel_spec(json.loads(json.dumps(channel_spec_dict(g, b))))
    assert g2 == g and b2 == b
