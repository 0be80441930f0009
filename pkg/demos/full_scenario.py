# coding: utf-8

# # A full scenario, as the command line runs it
#
# Same as `coupled-cats run --case he --dim 32 --steps 40 --classical-steps 8 --snapshots 0,8 --out he_demo`

# %%

from coupled_cats.runner import ScenarioConfig, plateau, run_scenario, time_to_reach

cfg = ScenarioConfig(case="he", dim=32, steps=40, classical_steps=8,
                     snapshot_times=(0, 8), out_dir="he_demo")
res = run_scenario(cfg)

# %%

s = res.series
for t, w, c in zip(s.t[:10], s.wse_half, s.cse_half):
    print(t, f"{w:.3f}", f"{c:.3f}")

level = plateau(s)
print("plateau", level, "t90", time_to_reach(s, 0.9 * level))

# %%
# he_demo/ now holds entropy.csv, config_echo and the snapshot grids.
