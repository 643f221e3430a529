import math

import pytest

from fogrelay.config import (
    ConfigError,
    ExperimentConfig,
    config_to_dict,
    from_mapping,
    load_config,
    serialize_config,
    validate,
)

from references import NOISE_W_REF, P_13DBM_W_REF, P_MAX_W_REF


def write(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


class TestDefaults:
    def test_empty_file_gives_default_scenario(self, tmp_path):
        cfg = load_config(write(tmp_path, ""))
        assert cfg.k_slots == 1500
        assert cfg.separation_m == 50.0
        assert cfg.p_max_dbm == 26.0
        assert cfg.snr_threshold_db == 0.0
        assert cfg.alpha == 4.0
        assert cfg.noise_dbm == -96.0
        assert cfg.mobility_limit_m == 0.01
        assert cfg == ExperimentConfig()

    def test_linear_views(self):
        cfg = ExperimentConfig()
        radio = cfg.radio()
        assert radio.noise_power_w == pytest.approx(NOISE_W_REF, rel=1e-14)
        assert radio.p_max_w == pytest.approx(P_MAX_W_REF, rel=1e-14)
        assert radio.snr_threshold == 1.0
        sdm = cfg.sdm()
        assert sdm.max_iters == 1500
        assert sdm.mobility_limit_m == 0.01

    def test_start_state_defaults(self):
        cfg = ExperimentConfig()
        start = cfg.start_state()
        assert start.pos.x_m == 25.0
        assert start.pos.y_m == 0.0
        # per-node start level defaults to half the budget on the dBm scale
        assert start.p_source_w == pytest.approx(P_13DBM_W_REF, rel=1e-14)
        assert start.p_source_w == start.p_relay_w

    def test_zero_threshold_via_minus_inf(self, tmp_path):
        cfg = load_config(write(tmp_path, "snr_threshold_db = -inf\n"))
        assert cfg.radio().snr_threshold == 0.0


class TestParsing:
    def test_comments_and_blanks(self, tmp_path):
        cfg = load_config(
            write(tmp_path, "# scenario\n\nseed = 42  # fixed stream\nk_slots=100\n")
        )
        assert cfg.seed == 42
        assert cfg.k_slots == 100

    def test_unknown_key_rejected_with_line(self, tmp_path):
        with pytest.raises(ConfigError, match="line 2.*mystery"):
            load_config(write(tmp_path, "seed = 1\nmystery = 3\n"))

    def test_malformed_line(self, tmp_path):
        with pytest.raises(ConfigError, match="line 1"):
            load_config(write(tmp_path, "just words\n"))

    def test_bad_value_type(self, tmp_path):
        with pytest.raises(ConfigError, match="line 1.*seed"):
            load_config(write(tmp_path, "seed = many\n"))

    def test_duplicate_key(self, tmp_path):
        with pytest.raises(ConfigError, match="duplicate"):
            load_config(write(tmp_path, "seed = 1\nseed = 2\n"))

    def test_lists(self, tmp_path):
        cfg = load_config(
            write(tmp_path, "l_values = 40, 45, 50\nschemes = flfp, olop\n")
        )
        assert cfg.l_values == (40.0, 45.0, 50.0)
        assert cfg.schemes == ("flfp", "olop")

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config("/nonexistent/exp.cfg")


class TestValidation:
    def test_shallow_path_loss_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="path_loss_exp"):
            load_config(write(tmp_path, "alpha = 1\n"))

    def test_scheme_names_checked(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown scheme"):
            load_config(write(tmp_path, "schemes = flfp, xxxx\n"))

    def test_inject_thetas_length(self, tmp_path):
        with pytest.raises(ConfigError, match="inject_thetas"):
            load_config(write(tmp_path, "n_relays = 3\ninject_thetas = 1,2\n"))

    def test_l_values_ascending(self, tmp_path):
        with pytest.raises(ConfigError, match="ascending"):
            load_config(write(tmp_path, "l_values = 50, 48\n"))

    def test_mc_sample_floor(self, tmp_path):
        with pytest.raises(ConfigError, match="mc_samples"):
            load_config(write(tmp_path, "mc_samples = 10\n"))

    def test_start_power_within_budget(self, tmp_path):
        with pytest.raises(ConfigError, match="budget"):
            load_config(write(tmp_path, "p_init_dbm = 26\n"))

    def test_from_mapping_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            from_mapping({"nope": 1})


class TestRoundTrip:
    def test_serialize_reparses_equal(self, tmp_path):
        cfg = ExperimentConfig(
            seed=9,
            k_slots=321,
            l_values=(31.5, 44.0),
            snr_threshold_db=2.5,
            inject_thetas=None,
        )
        text = serialize_config(cfg)
        reparsed = load_config(write(tmp_path, text))
        assert reparsed == validate(cfg)

    def test_dict_round_trip(self):
        cfg = ExperimentConfig(seed=5, schemes=("olop",))
        assert from_mapping(config_to_dict(cfg)) == cfg

    def test_minus_inf_survives(self, tmp_path):
        cfg = ExperimentConfig(snr_threshold_db=-math.inf)
        reparsed = load_config(write(tmp_path, serialize_config(cfg)))
        assert reparsed.snr_threshold_db == -math.inf
