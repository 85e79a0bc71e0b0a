#!/usr/bin/env python3
"""Generate the shipped horse-colic-shaped data files.

The real UCI Horse Colic files cannot be redistributed here, so this script
produces a stand-in with the same layout (28 whitespace-separated columns,
"?" for missing) and the same headline statistics:

  368 examples (300 ".data" + 68 ".test"), two rows with a missing outcome,
  outcome split 225/89/52 (lived/died/euthanized), surgical split 232/136,
  ~30% of predictor cells missing.

Class-conditional generation with heavy noise keeps the learning problem in a
realistic difficulty band, which the script checks with a logistic-regression
probe before writing anything. Fully deterministic for a fixed seed.
"""

import sys
from pathlib import Path

import numpy as np

SEED = 20260816
N = 368
N_TRAIN = 300
OUT_DIR = Path(__file__).resolve().parent.parent / "data"

# outcome (col 23): counts over the 366 rows where it is present, plus 2 missing
OUTCOME_COUNTS = {"1": 225, "2": 89, "3": 52}  # lived, died, euthanized
# surgical lesion (col 24): never missing
SURGICAL_YES = 232

# per-outcome surgical-lesion "yes" counts (worse outcomes skew surgical);
# the two missing-outcome rows are both surgical
SURGICAL_BY_OUTCOME = {"1": 108, "2": 76, "3": 46, "?": 2}

PREDICTOR_COLS = [1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22]
MISSING_TARGET_CELLS = 2318  # of 368 * 21 = 7728 -> 0.29995

# initial per-column missing rates (refined to the exact cell count afterwards)
MISSING_RATE = {
    1: 0.005, 2: 0.0, 4: 0.24, 5: 0.10, 6: 0.23, 7: 0.22, 8: 0.27, 9: 0.19,
    10: 0.13, 11: 0.22, 12: 0.17, 13: 0.22, 14: 0.44, 15: 0.44, 16: 0.84,
    17: 0.42, 18: 0.46, 19: 0.11, 20: 0.13, 21: 0.64, 22: 0.76,
}

ORDINAL_LEVELS = {  # column -> tokens in rank order (lowest first)
    7: ["4", "3", "1", "2"],      # extremity temperature: cold..warm
    8: ["4", "3", "1", "2"],      # peripheral pulse: absent..increased
    11: ["1", "2", "3", "4", "5"],  # pain
    12: ["4", "3", "2", "1"],     # peristalsis: absent..hypermotile
    13: ["1", "2", "3", "4"],     # abdominal distension
    14: ["1", "2", "3"],          # nasogastric tube
    15: ["1", "3", "2"],          # nasogastric reflux: none, <1l, >1l
    17: ["4", "3", "1", "2"],     # rectal exam feces: absent..increased
}

CATEGORICAL_LEVELS = {
    1: ["1", "2"], 2: ["1", "9"], 9: ["1", "2", "3", "4", "5", "6"],
    10: ["1", "2"], 18: ["1", "2", "3", "4", "5"], 21: ["1", "2", "3"],
    23: ["1", "2", "3"], 24: ["1", "2"],
}


def sample_ordinal(rng, mu, spread, n_ranks):
    ranks = np.arange(n_ranks)
    w = np.exp(-0.5 * ((ranks - mu) / spread) ** 2)
    w /= w.sum()
    return int(rng.choice(n_ranks, p=w))


def sample_softmax(rng, base, shift, z):
    logits = np.log(base) + np.asarray(shift) * z
    p = np.exp(logits - logits.max())
    p /= p.sum()
    return int(rng.choice(len(base), p=p))


def generate(rng):
    outcomes = (["1"] * OUTCOME_COUNTS["1"] + ["2"] * OUTCOME_COUNTS["2"]
                + ["3"] * OUTCOME_COUNTS["3"] + ["?"] * 2)
    rng.shuffle(outcomes)

    # exact surgical counts inside each outcome group
    surgical = [""] * N
    for label, yes_count in SURGICAL_BY_OUTCOME.items():
        rows = [i for i, o in enumerate(outcomes) if o == label]
        yes_rows = set(rng.choice(rows, size=yes_count, replace=False).tolist())
        for i in rows:
            surgical[i] = "1" if i in yes_rows else "2"

    z_base = {"1": -0.55, "2": 0.85, "3": 1.15, "?": 0.30}
    table = []
    for i in range(N):
        z = z_base[outcomes[i]] + (0.50 if surgical[i] == "1" else -0.35) + rng.normal(0.0, 0.75)
        row = {}
        row[1] = "1" if rng.random() < (0.86 if surgical[i] == "1" else 0.30) else "2"
        row[2] = "9" if rng.random() < 0.08 else "1"
        row[3] = str(rng.integers(520000, 540000))
        row[4] = f"{np.clip(37.9 + 0.25 * z + rng.normal(0, 0.55), 35.4, 40.8):.1f}"
        row[5] = str(int(np.clip(round(70 + 16 * z + rng.normal(0, 16)), 30, 184)))
        row[6] = str(int(np.clip(round(22 + 6 * z + rng.normal(0, 10)), 8, 96)))
        row[7] = ORDINAL_LEVELS[7][sample_ordinal(rng, 2.2 - 0.9 * z, 0.9, 4)]
        row[8] = ORDINAL_LEVELS[8][sample_ordinal(rng, 2.3 - 0.8 * z, 0.8, 4)]
        row[9] = CATEGORICAL_LEVELS[9][sample_softmax(
            rng, [0.30, 0.18, 0.22, 0.12, 0.10, 0.08], [-0.30, -0.15, 0.0, 0.45, 0.15, 0.60], z)]
        row[10] = "2" if rng.random() < 1.0 / (1.0 + np.exp(1.1 - 1.0 * z)) else "1"
        row[11] = ORDINAL_LEVELS[11][sample_ordinal(rng, 1.2 + 1.1 * z, 1.0, 5)]
        row[12] = ORDINAL_LEVELS[12][sample_ordinal(rng, 2.0 - 0.9 * z, 0.75, 4)]
        row[13] = ORDINAL_LEVELS[13][sample_ordinal(rng, 0.8 + 0.9 * z, 0.9, 4)]
        row[14] = ORDINAL_LEVELS[14][sample_ordinal(rng, 0.5 + 0.5 * z, 0.8, 3)]
        row[15] = ORDINAL_LEVELS[15][sample_ordinal(rng, 0.4 + 0.6 * z, 0.8, 3)]
        row[16] = f"{np.clip(4.0 + 0.5 * z + rng.normal(0, 1.2), 1.0, 7.5):.1f}"
        row[17] = ORDINAL_LEVELS[17][sample_ordinal(rng, 2.0 - 0.8 * z, 0.9, 4)]
        row[18] = CATEGORICAL_LEVELS[18][sample_softmax(
            rng, [0.22, 0.18, 0.12, 0.28, 0.20], [-0.40, -0.10, 0.0, 0.35, 0.45], z)]
        row[19] = f"{np.clip(45 + 5.5 * z + rng.normal(0, 7), 23.0, 75.0):.1f}"
        if rng.random() < np.clip(0.40 + 0.06 * z, 0.1, 0.8):
            row[20] = f"{np.clip(rng.normal(45, 16), 10.0, 89.0):.1f}"
        else:
            row[20] = f"{np.clip(rng.normal(7.0, 1.2), 3.3, 10.0):.1f}"
        row[21] = CATEGORICAL_LEVELS[21][sample_softmax(rng, [0.45, 0.30, 0.25], [-0.50, 0.10, 0.55], z)]
        row[22] = f"{np.clip(3.2 + 0.7 * z + rng.normal(0, 1.1), 0.1, 10.0):.1f}"
        row[23] = outcomes[i]
        row[24] = surgical[i]
        if surgical[i] == "1":
            row[25] = str(rng.choice([2208, 2205, 3205, 4300, 3111, 2112, 5400, 2209, 3207, 2124]))
        else:
            row[25] = "0" if rng.random() < 0.7 else str(rng.choice([400, 3300, 11300, 2209]))
        row[26] = "0" if rng.random() < 0.93 else str(rng.choice([1400, 3111, 2208]))
        row[27] = "0" if rng.random() < 0.97 else "2209"
        row[28] = "1" if rng.random() < 0.33 else "2"
        table.append(row)
    return table


def apply_missing(rng, table):
    mask = np.zeros((N, len(PREDICTOR_COLS)), dtype=bool)
    for j, col in enumerate(PREDICTOR_COLS):
        mask[:, j] = rng.random(N) < MISSING_RATE[col]

    # steer to the exact cell count, never starving a row below 4 present cells
    def row_missing(i):
        return int(mask[i].sum())

    while mask.sum() != MISSING_TARGET_CELLS:
        i = int(rng.integers(N))
        j = int(rng.integers(len(PREDICTOR_COLS)))
        if mask.sum() < MISSING_TARGET_CELLS:
            if not mask[i, j] and row_missing(i) < len(PREDICTOR_COLS) - 4:
                mask[i, j] = True
        elif mask[i, j]:
            mask[i, j] = False

    out = []
    for i, row in enumerate(table):
        tokens = []
        for col in range(1, 29):
            if col in PREDICTOR_COLS and mask[i, PREDICTOR_COLS.index(col)]:
                tokens.append("?")
            elif col == 23 and row[23] == "?":
                tokens.append("?")
            else:
                tokens.append(row[col])
        out.append(tokens)
    return out


def encode_for_probe(rows):
    """One-hot categoricals, rank-encode ordinals, impute column means."""
    blocks = []
    for col in PREDICTOR_COLS:
        raw = [r[col - 1] for r in rows]
        present = np.array([t != "?" for t in raw])
        if col in CATEGORICAL_LEVELS:
            levels = CATEGORICAL_LEVELS[col]
            block = np.zeros((len(rows), len(levels) + 1))
            for i, t in enumerate(raw):
                if t == "?":
                    block[i, -1] = 1.0
                else:
                    block[i, levels.index(t)] = 1.0
        else:
            if col in ORDINAL_LEVELS:
                vals = np.array([float(ORDINAL_LEVELS[col].index(t)) if t != "?" else np.nan for t in raw])
            else:
                vals = np.array([float(t) if t != "?" else np.nan for t in raw])
            fill = np.nanmean(vals) if present.any() else 0.0
            vals = np.where(np.isnan(vals), fill, vals)
            sd = vals.std()
            if sd > 0:
                vals = (vals - vals.mean()) / sd
            block = np.column_stack([vals, (~present).astype(float)])
        blocks.append(block)
    return np.hstack(blocks)


def probe_error(rows, target_col):
    from sklearn.linear_model import LogisticRegression
    from sklearn.model_selection import StratifiedKFold

    keep = [r for r in rows if r[target_col - 1] != "?"]
    X = encode_for_probe(keep)
    y = np.array([CATEGORICAL_LEVELS[target_col].index(r[target_col - 1]) for r in keep])
    errors = []
    for train, test in StratifiedKFold(5, shuffle=True, random_state=0).split(X, y):
        clf = LogisticRegression(max_iter=3000).fit(X[train], y[train])
        errors.append(1.0 - clf.score(X[test], y[test]))
    return float(np.mean(errors))


def validate(rows):
    assert len(rows) == N and all(len(r) == 28 for r in rows)
    outcome = [r[22] for r in rows]
    assert outcome.count("?") == 2
    for token, count in OUTCOME_COUNTS.items():
        assert outcome.count(token) == count, (token, outcome.count(token))
    surgical = [r[23] for r in rows]
    assert "?" not in surgical
    assert surgical.count("1") == SURGICAL_YES and surgical.count("2") == N - SURGICAL_YES

    missing = sum(1 for r in rows for col in PREDICTOR_COLS if r[col - 1] == "?")
    fraction = missing / (N * len(PREDICTOR_COLS))
    assert missing == MISSING_TARGET_CELLS, missing
    assert abs(fraction - 0.30) < 0.005, fraction

    for r in rows:
        for col, levels in {**ORDINAL_LEVELS, **CATEGORICAL_LEVELS}.items():
            t = r[col - 1]
            assert t == "?" or t in levels, (col, t)
        for col in (4, 5, 6, 16, 19, 20, 22):
            if r[col - 1] != "?":
                float(r[col - 1])

    e24 = probe_error(rows, 24)
    e23 = probe_error(rows, 23)
    print(f"probe error HC24: {e24:.4f}  HC23: {e23:.4f}")
    assert 0.14 <= e24 <= 0.26, e24
    assert 0.27 <= e23 <= 0.42, e23


def main():
    rng = np.random.default_rng(SEED)
    rows = apply_missing(rng, generate(rng))
    validate(rows)

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with open(OUT_DIR / "horse-colic.data", "w") as f:
        for r in rows[:N_TRAIN]:
            f.write(" ".join(r) + "\n")
    with open(OUT_DIR / "horse-colic.test", "w") as f:
        for r in rows[N_TRAIN:]:
            f.write(" ".join(r) + "\n")
    print(f"wrote {N_TRAIN}+{N - N_TRAIN} rows to {OUT_DIR}")


if __name__ == "__main__":
    sys.exit(main())
