#!/usr/bin/env python3
"""Spreadsheet-style oracle for the technical-indicator golden files.

Computes every default indicator column with plain loops, independently of
the C++ implementation, and freezes the values into golden CSVs. Undefined
(warm-up) entries are written as nan.

Conventions (shared with the library and its docs):
  - windows written [a..b] are inclusive; "previous n days" for LL/HH/MP
    excludes the current day, while WR and the stochastic ratio use the
    current-inclusive window so their ranges stay bounded
  - recursive indicators seed with the simple average of their first n raw
    terms at the first index where that average exists
  - zero denominators: 50 for 0-100 oscillators, 0.5 for the ultimate
    oscillator averages, 0 otherwise
"""

import csv
import math
import statistics
import sys

NAN = float("nan")


def load(path):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    o = [float(r["open"]) for r in rows]
    h = [float(r["high"]) for r in rows]
    l = [float(r["low"]) for r in rows]
    c = [float(r["close"]) for r in rows]
    v = [float(r["volume"]) for r in rows]
    return o, h, l, c, v


def seeded_recursion(raw, n, w):
    out = [NAN] * len(raw)
    first = next((i for i, x in enumerate(raw) if not math.isnan(x)), None)
    if first is None or first + n - 1 >= len(raw):
        return out
    seed_at = first + n - 1
    out[seed_at] = sum(raw[first:seed_at + 1]) / n
    for t in range(seed_at + 1, len(raw)):
        out[t] = (1 - w) * out[t - 1] + w * raw[t]
    return out


def wilder(raw, n):
    out = [NAN] * len(raw)
    first = next((i for i, x in enumerate(raw) if not math.isnan(x)), None)
    if first is None or first + n - 1 >= len(raw):
        return out
    seed_at = first + n - 1
    out[seed_at] = sum(raw[first:seed_at + 1]) / n
    for t in range(seed_at + 1, len(raw)):
        out[t] = (out[t - 1] * (n - 1) + raw[t]) / n
    return out


def compute_all(o, h, l, c, v):
    N = len(c)
    cols = {}

    cols["O"], cols["H"], cols["L"], cols["C"], cols["V"] = o, h, l, c, v

    def ma(n):
        return [sum(c[t - n + 1:t + 1]) / n if t >= n - 1 else NAN for t in range(N)]

    for n in (5, 10, 15, 20):
        cols[f"MA_{n}"] = ma(n)

    def ema(n):
        a = 2 / (n + 1)
        out = [c[0]]
        for t in range(1, N):
            out.append(a * c[t] + (1 - a) * out[-1])
        return out

    for n in (5, 10, 15, 20):
        cols[f"EMA_{n}"] = ema(n)

    for n in (5, 10, 15, 20):
        out = [NAN] * N
        for t in range(n, N):
            ud = dd = 0
            upc = dpc = 0.0
            for j in range(t - n + 1, t + 1):
                if c[j] > c[j - 1]:
                    ud += 1
                    upc += c[j]
                elif c[j] < c[j - 1]:
                    dd += 1
                    dpc += c[j]
            if ud == 0 or dd == 0:
                out[t] = 50.0
            else:
                up, down = upc / ud, dpc / dd
                out[t] = 100.0 * up / (up + down)
        cols[f"RSI_{n}"] = out

    def stoch_ratio(n):
        out = [NAN] * N
        for t in range(n - 1, N):
            hh = max(h[t - n + 1:t + 1])
            ll = min(l[t - n + 1:t + 1])
            out[t] = 0.0 if hh == ll else (c[t] - hh) / (hh - ll)
        return out

    k_raw = seeded_recursion(stoch_ratio(9), 9, 1 / 3)
    d_raw = seeded_recursion(k_raw, 9, 1 / 3)
    cols["K_9"] = [x * 100 if not math.isnan(x) else NAN for x in k_raw]
    cols["D_9"] = [x * 100 if not math.isnan(x) else NAN for x in d_raw]

    e12, e26 = ema(12), ema(26)
    diff = [a - b for a, b in zip(e12, e26)]
    cols["MACD_9"] = seeded_recursion(diff, 9, 2 / 10)

    for n in (5, 10, 15, 20):
        out = [NAN] * N
        for t in range(n - 1, N):
            hh = max(h[t - n + 1:t + 1])
            ll = min(l[t - n + 1:t + 1])
            out[t] = 50.0 if hh == ll else 100.0 * (hh - c[t]) / (hh - ll)
        cols[f"WR_{n}"] = out

    out = [NAN] * N
    for t in range(10, N):
        ud = sum(1 for j in range(t - 9, t + 1) if c[j] > c[j - 1])
        out[t] = 100.0 * ud / 10
    cols["PSY_10"] = out

    for x, y in ((5, 10), (5, 15), (5, 20), (10, 15), (10, 20), (15, 20)):
        mx, my = ma(x), ma(y)
        cols[f"OSCP_{x}_{y}"] = [
            NAN if t < max(x, y) - 1 else (0.0 if mx[t] == 0 else (mx[t] - my[t]) / mx[t])
            for t in range(N)
        ]

    tr = [NAN] + [max(h[t], c[t - 1]) - min(l[t], c[t - 1]) for t in range(1, N)]
    pdm = [NAN] + [h[t] - h[t - 1] for t in range(1, N)]
    mdm = [NAN] + [l[t] - l[t - 1] for t in range(1, N)]
    for n in (5, 10, 15, 20):
        trs = wilder(tr, n)
        for name, dm in ((f"+DI_{n}", pdm), (f"-DI_{n}", mdm)):
            dms = wilder(dm, n)
            cols[name] = [
                NAN if math.isnan(dms[t]) else
                (0.0 if trs[t] == 0 else 100.0 * dms[t] / trs[t])
                for t in range(N)
            ]

    ma5 = ma(5)
    cols["BIAS_5"] = [
        NAN if t < 4 else (0.0 if ma5[t] == 0 else 100.0 * (c[t] - ma5[t]) / ma5[t])
        for t in range(N)
    ]

    out = [NAN] * N
    for t in range(10, N):
        uv = dv = 0.0
        for j in range(t - 9, t + 1):
            if c[j] > c[j - 1]:
                uv += v[j]
            elif c[j] < c[j - 1]:
                dv += v[j]
        out[t] = 0.0 if uv + dv == 0 else uv / (uv + dv)
    cols["VR_10"] = out

    for name, num_f, den_f in (
        ("AR_20", lambda j: h[j] - o[j], lambda j: o[j] - l[j]),
        ("BR_20", lambda j: h[j] - c[j], lambda j: c[j] - l[j]),
    ):
        out = [NAN] * N
        for t in range(19, N):
            num = sum(num_f(j) for j in range(t - 19, t + 1))
            den = sum(den_f(j) for j in range(t - 19, t + 1))
            out[t] = 0.0 if den == 0 else num / den
        cols[name] = out

    cols["LL_10"] = [NAN if t < 10 else min(l[t - 10:t]) for t in range(N)]
    cols["HH_10"] = [NAN if t < 10 else max(h[t - 10:t]) for t in range(N)]
    cols["MP_10"] = [NAN if t < 10 else statistics.median(c[t - 10:t]) for t in range(N)]
    cols["ATR_10"] = wilder(tr, 10)

    for n in (5, 10, 15, 20):
        cols[f"RDP_{n}"] = [NAN if t < n else 100.0 * (c[t] - c[t - n]) / c[t - n]
                            for t in range(N)]
        cols[f"MTM_{n}"] = [NAN if t < n else c[t] - c[t - n] for t in range(N)]
        cols[f"ROC_{n}"] = [NAN if t < n else 100.0 * c[t] / c[t - n] for t in range(N)]

    bp = [NAN] + [c[t] - min(l[t], c[t - 1]) for t in range(1, N)]
    out = [NAN] * N
    for t in range(30, N):
        def avg(p):
            s_bp = sum(bp[t - p + 1:t + 1])
            s_tr = sum(tr[t - p + 1:t + 1])
            return 0.5 if s_tr == 0 else s_bp / s_tr
        out[t] = (100.0 / 7.0) * (4 * avg(10) + 2 * avg(20) + avg(30))
    cols["UO_10_20_30"] = out

    hh10 = cols["HH_10"]
    out = [NAN] * N
    for t in range(24, N):
        acc = 0.0
        for k in range(1, 15):
            r = 100.0 * (c[t] - hh10[t - k]) / hh10[t - k]
            acc += r * r
        out[t] = math.sqrt(acc / 14)
    cols["ULCER_14"] = out

    return cols


ORDER = (
    ["O", "H", "L", "C", "V"]
    + [f"MA_{n}" for n in (5, 10, 15, 20)]
    + [f"EMA_{n}" for n in (5, 10, 15, 20)]
    + [f"RSI_{n}" for n in (5, 10, 15, 20)]
    + ["K_9", "D_9", "MACD_9"]
    + [f"WR_{n}" for n in (5, 10, 15, 20)]
    + ["PSY_10"]
    + [f"OSCP_{x}_{y}" for x, y in ((5, 10), (5, 15), (5, 20), (10, 15), (10, 20), (15, 20))]
    + [f"+DI_{n}" for n in (5, 10, 15, 20)]
    + [f"-DI_{n}" for n in (5, 10, 15, 20)]
    + ["BIAS_5", "VR_10", "AR_20", "BR_20", "LL_10", "HH_10", "MP_10", "ATR_10"]
    + [f"RDP_{n}" for n in (5, 10, 15, 20)]
    + [f"MTM_{n}" for n in (5, 10, 15, 20)]
    + [f"ROC_{n}" for n in (5, 10, 15, 20)]
    + ["UO_10_20_30", "ULCER_14"]
)


def main():
    for src, dst in (("scripted_series_30.csv", "golden_indicators_30.csv"),
                     ("scripted_series_45.csv", "golden_indicators_45.csv")):
        cols = compute_all(*load(src))
        assert set(cols) == set(ORDER), sorted(set(cols) ^ set(ORDER))
        with open(dst, "w") as fh:
            fh.write(",".join(ORDER) + "\n")
            n = len(cols["C"])
            for t in range(n):
                fh.write(",".join(repr(cols[name][t]) for name in ORDER) + "\n")
        print(f"{dst}: {n} rows x {len(ORDER)} columns", file=sys.stderr)


if __name__ == "__main__":
    main()
