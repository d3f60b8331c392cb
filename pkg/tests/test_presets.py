"""Preset catalog coverage and the non-simulation preset bundles."""

import numpy as np
import pytest

from frontlab.errors import InputError
from frontlab.presets import (FIG9_CURVES, FIG9_RUNS, available_presets,
                              get_preset, preset_figures, run_preset)


class TestCatalog:
    def test_every_figure_covered_once(self):
        """One figure-level preset per published figure (1 and 3..9; 2 is the
        classification table)."""
        figures = preset_figures()
        assert sorted(figures) == [f"fig{i}" for i in range(1, 10)]
        for fig, names in figures.items():
            assert fig in names  # the figure-level preset carries its own id

    def test_panel_presets_exist(self):
        for name in ("fig3a", "fig3d", "fig4b", "fig5c", "fig6a", "fig7b", "fig8c"):
            preset = get_preset(name)
            assert preset.config is not None

    def test_sweep_presets_list_members(self):
        sweep = get_preset("fig3")
        assert sweep.members == ("fig3a", "fig3b", "fig3c", "fig3d")

    def test_panel_parameters(self):
        fig3a = get_preset("fig3a").config
        assert fig3a.reaction.params.alpha == 0.2
        assert fig3a.data.beta == 0.1
        fig7b = get_preset("fig7b").config
        assert fig7b.reaction.params.alpha == 0.4
        assert fig7b.data.beta == 2.0
        assert fig7b.data.scale == 100.0

    def test_unknown_preset_lists_catalog(self):
        with pytest.raises(InputError) as exc_info:
            get_preset("fig99")
        assert "fig9" in str(exc_info.value)

    def test_available_sorted(self):
        names = available_presets()
        assert names == sorted(names)

    def test_fig9_runs_match_published_settings(self):
        assert set(FIG9_RUNS) == {"subexp_bounded", "subexp_light", "algebraic"}
        assert FIG9_RUNS["subexp_bounded"].t_end == 30.0
        assert FIG9_RUNS["algebraic"].data.scale == 100.0
        for cfg in FIG9_RUNS.values():
            assert cfg.reaction.params.alpha == 0.4
            assert cfg.lambdas == (0.5,)

    def test_fig9_overlay_forms(self):
        # quoted fitted curves: 1.9t-4.0, 0.0013 t**(1/0.28)+40, 0.0236 e**((1.4t)**(1/1.4))+10
        t = 10.0
        assert FIG9_CURVES["overlay_linear"](t) == pytest.approx(15.0)
        assert FIG9_CURVES["overlay_power"](t) == pytest.approx(
            0.0013 * 10.0 ** (1.0 / 0.28) + 40.0)
        assert FIG9_CURVES["overlay_exp_power"](t) == pytest.approx(
            0.0236 * np.exp(14.0 ** (1.0 / 1.4)) + 10.0)


class TestTablePresets:
    def test_fig1_bundle(self, tmp_path):
        out = run_preset("fig1", out_root=str(tmp_path), log=lambda *_: None)
        lines = (tmp_path / "fig1" / "families.csv").read_text().splitlines()
        assert lines[0] == "s,percapita_kpp,percapita_weak,percapita_allee,f_kpp,f_weak,f_allee"
        assert len(lines) == 401
        first = [float(v) for v in lines[1].split(",")]
        # near zero: KPP per-capita ~ r, the other two collapse
        assert first[1] > first[2] > first[3]
        assert (tmp_path / "fig1" / "plot.gp").exists()

    def test_fig2_bundle(self, tmp_path):
        run_preset("fig2", out_root=str(tmp_path), log=lambda *_: None)
        lines = (tmp_path / "fig2" / "classification.csv").read_text().splitlines()
        assert lines[0] == "alpha,beta,regime,power_exponent,threshold_beta"
        assert len(lines) == 1 + 3 * 7
        # threshold rows classify as finite speed at their own alpha
        rows = [line.split(",") for line in lines[1:]]
        for alpha, thr in (("0.2", 5.0 / 6.0), ("0.4", 5.0 / 7.0), ("0.6", 5.0 / 8.0)):
            matching = [r for r in rows
                        if r[0] == alpha and abs(float(r[1]) - thr) < 1e-12]
            assert matching and matching[0][2] == "finite_speed"
