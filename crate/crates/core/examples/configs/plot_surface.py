"""Surface plot of a trajectory or periodic-solution CSV (columns t,x,value).

usage: python plot_surface.py traj.csv [out.png]
"""
import sys

import matplotlib.pyplot as plt
import numpy as np


def main():
    path = sys.argv[1]
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    with open(path) as f:
        label = f.readline().strip().split(",")[2]
    ts = np.unique(data[:, 0])
    xs = np.unique(data[:, 1])
    z = data[:, 2].reshape(len(ts), len(xs))
    T, X = np.meshgrid(ts, xs, indexing="ij")
    ax = plt.figure(figsize=(8, 6)).add_subplot(projection="3d")
    ax.plot_surface(X, T, z, cmap="viridis", linewidth=0)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_zlabel(label)
    if len(sys.argv) > 2:
        plt.savefig(sys.argv[2], dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
