#!/usr/bin/env python3
"""Render the toolkit's CSV outputs as PNG figures.

Usage:
    plot_results.py fixed-point  <out_dir>   # fixed_point.csv
    plot_results.py validate     <out_dir>   # validate.csv
    plot_results.py tradeoff     <out_dir>   # curve.csv + rga_points.csv
    plot_results.py simulate     <out_dir>   # simulate.csv
    plot_results.py durability   <out_dir>   # durability.csv

Figures are written next to the CSVs they come from.
"""

import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_fixed_point(out):
    rows = read_rows(out / "fixed_point.csv")
    states = [int(r["state"]) for r in rows]
    plt.figure(figsize=(7, 4))
    plt.plot(states, [float(r["closed_form"]) for r in rows], "o-", label="closed form")
    plt.plot(states, [float(r["ode"]) for r in rows], "x--", label="ODE steady state")
    plt.xlabel("valid pages per block")
    plt.ylabel("fraction of blocks")
    plt.legend()
    plt.tight_layout()
    plt.savefig(out / "fixed_point.png", dpi=150)


def plot_validate(out):
    rows = read_rows(out / "validate.csv")
    states = [int(r["state"]) for r in rows]
    plt.figure(figsize=(7, 4))
    plt.plot(states, [float(r["simulated"]) for r in rows], "o-", label="simulated")
    plt.plot(states, [float(r["model"]) for r in rows], "x--", label="model")
    plt.xlabel("valid pages per block")
    plt.ylabel("fraction of blocks")
    plt.legend()
    plt.tight_layout()
    plt.savefig(out / "validate.png", dpi=150)


def plot_tradeoff(out):
    curve = read_rows(out / "curve.csv")
    plt.figure(figsize=(7, 4))
    plt.plot([float(r["c_star"]) for r in curve], [float(r["w_star"]) for r in curve],
             "-", label="optimal curve")
    points = out / "rga_points.csv"
    if points.exists():
        rga = read_rows(points)
        plt.plot([float(r["cost"]) for r in rga], [float(r["wear"]) for r in rga],
                 "o", markersize=3, label="randomized greedy")
    plt.xlabel("cleaning cost")
    plt.ylabel("wear-leveling")
    plt.legend()
    plt.tight_layout()
    plt.savefig(out / "tradeoff.png", dpi=150)


def bar_chart(out, csv_name, column, ylabel, png_name):
    rows = read_rows(out / csv_name)
    labels = [r["policy"] for r in rows]
    plt.figure(figsize=(7, 4))
    plt.bar(labels, [float(r[column]) for r in rows])
    plt.ylabel(ylabel)
    plt.tight_layout()
    plt.savefig(out / png_name, dpi=150)


def main():
    if len(sys.argv) != 3:
        print(__doc__)
        return 2
    kind, out = sys.argv[1], pathlib.Path(sys.argv[2])
    if kind == "fixed-point":
        plot_fixed_point(out)
    elif kind == "validate":
        plot_validate(out)
    elif kind == "tradeoff":
        plot_tradeoff(out)
    elif kind == "simulate":
        bar_chart(out, "simulate.csv", "cleaning_cost", "cleaning cost", "cleaning_cost.png")
        bar_chart(out, "simulate.csv", "wear_leveling", "wear-leveling", "wear_leveling.png")
        bar_chart(out, "simulate.csv", "iops", "IOPS", "iops.png")
    elif kind == "durability":
        bar_chart(out, "durability.csv", "normalized_vs_greedy",
                  "lifetime relative to greedy", "durability.png")
    else:
        print(__doc__)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
