"""Figure for bench results, written next to the CSV."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import OPERATIONS, BenchRow  # noqa: E402

_MARKERS = {"RSA": "o", "PAILLIER": "s", "ELGAMAL_MUL": "^", "ELGAMAL_ADD": "v", "GM": "D"}


def _series(rows, operation):
    by_scheme = {}
    for row in rows:
        if row.operation == operation:
            by_scheme.setdefault(row.scheme, []).append(row)
    return {s: sorted(rs, key=lambda r: r.key_bits) for s, rs in by_scheme.items()}


def render_bench_figure(rows: list[BenchRow], path) -> None:
    """Median latency per operation and ciphertext size, against key size."""
    fig, axes = plt.subplots(1, len(OPERATIONS) + 1, figsize=(4 * (len(OPERATIONS) + 1), 3.6))
    for ax, operation in zip(axes, OPERATIONS):
        for scheme, series in _series(rows, operation).items():
            xs = [r.key_bits for r in series]
            ax.errorbar(xs, [r.median_us for r in series],
                        yerr=[[0] * len(series), [r.p90_us - r.median_us for r in series]],
                        marker=_MARKERS.get(scheme, "o"), capsize=3, label=scheme)
        ax.set_yscale("log")
        ax.set_title(operation)
        ax.set_xlabel("key bits")
        ax.grid(True, which="both", alpha=0.3)
    axes[0].set_ylabel("median latency (us), bar to p90")
    axes[0].legend(fontsize=8)

    ax = axes[-1]
    for scheme, series in _series(rows, OPERATIONS[0]).items():
        ax.plot([r.key_bits for r in series], [r.ciphertext_bits / r.plaintext_bits for r in series],
                marker=_MARKERS.get(scheme, "o"), label=scheme)
    ax.set_yscale("log")
    ax.set_title("ciphertext expansion")
    ax.set_xlabel("key bits")
    ax.set_ylabel("ciphertext bits / plaintext bits")
    ax.grid(True, which="both", alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
