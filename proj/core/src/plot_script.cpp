#include "iernn/plot_script.hpp"

#include <ostream>

namespace iernn {

namespace {

std::string py_string(const std::string& s)
{
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out + "'";
}

constexpr const char* kBody = R"PY(
import csv
import os
import sys

import matplotlib
if "--show" not in sys.argv:
    matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], [r for r in rows[1:] if r]
    cols = {h: [float(r[i]) for r in body] for i, h in enumerate(header)}
    return header, cols


def group(header, cols, prefix):
    names = [h for h in header if h.startswith(prefix)]
    return names, [cols[h] for h in names]


def panels(label, name):
    header, c = load(name)
    t = c["t"]
    fig, ax = plt.subplots(5, 1, figsize=(8, 16))
    fig.suptitle(f"{TITLE}: {label}")

    axes = [a for a in ("x", "y", "z") if "pos_" + a in c]
    pos = [c["pos_" + a] for a in axes]
    ref = [[p - e for p, e in zip(c["pos_" + a], c["eps_" + a])] for a in axes]
    ax[0].plot(ref[0], ref[1], "k--", label="reference")
    ax[0].plot(pos[0], pos[1], label="end effector")
    ax[0].set_xlabel(axes[0] + " [m]")
    ax[0].set_ylabel(axes[1] + " [m]")
    ax[0].set_aspect("equal", adjustable="datalim")
    ax[0].legend()

    for a, prefix, unit in ((ax[1], "dtheta_", "rad/s"), (ax[2], "ddtheta_", "rad/s^2")):
        names, series = group(header, c, prefix)
        for n, s in zip(names, series):
            a.plot(t, s, label=n)
        a.set_ylabel(f"{prefix.rstrip('_')} [{unit}]")
        a.legend(ncol=3, fontsize="small")

    for a in axes:
        ax[3].plot(t, c["eps_" + a], label="eps_" + a)
    ax[3].set_ylabel("position error [m]")
    ax[3].legend()

    ax[4].plot(t, c["rms"])
    ax[4].set_ylabel("RMS error [m]")
    ax[4].set_xlabel("t [s]")
    fig.tight_layout()
    return fig, t, c["rms"]


def main():
    traces = []
    for label, name in RUNS:
        fig, t, rms = panels(label, name)
        stem = os.path.splitext(name)[0]
        fig.savefig(os.path.join(HERE, stem + ".png"), dpi=120)
        traces.append((label, t, rms))
    if len(traces) > 1:
        fig, ax = plt.subplots(figsize=(8, 4))
        for label, t, rms in traces:
            ax.semilogy(t, rms, label=label)
        ax.set_xlabel("t [s]")
        ax.set_ylabel("RMS error [m]")
        ax.set_title(TITLE + ": RMS comparison")
        ax.legend()
        fig.tight_layout()
        fig.savefig(os.path.join(HERE, "comparison.png"), dpi=120)
    if "--show" in sys.argv:
        plt.show()


if __name__ == "__main__":
    main()
)PY";

}  // namespace

void write_plot_script(const std::vector<PlotRun>& runs, const std::string& title,
                       std::ostream& os)
{
  os << "#!/usr/bin/env python3\n";
  os << "# Generated plot script. Writes PNGs next to itself; pass --show to open windows.\n\n";
  os << "TITLE = " << py_string(title) << "\n";
  os << "RUNS = [\n";
  for (const auto& r : runs) {
    os << "    (" << py_string(r.label) << ", " << py_string(r.csv_file) << "),\n";
  }
  os << "]\n";
  os << kBody;
}

}  // namespace iernn
