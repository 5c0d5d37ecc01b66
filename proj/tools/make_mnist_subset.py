#!/usr/bin/env python3
"""Build a small MNIST subset in IDX format.

The source is the 5,000-digit MNIST sample (500 per class) bundled with the
mlxtend wheel, which is fetched with pip when no wheel path is given. The
samples are shuffled with a fixed seed and split into 2,000 training and
1,000 test images, written with the standard MNIST file names.
"""

import argparse
import gzip
import pathlib
import struct
import subprocess
import sys
import tempfile
import zipfile

import numpy as np

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def fetch_wheel(dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-d", dest, "mlxtend==0.24.0"],
        check=True,
    )
    return next(pathlib.Path(dest).glob("mlxtend-*.whl"))


def write_idx(prefix, images, labels):
    with open(f"{prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        f.write(images.astype(np.uint8).tobytes())
    with open(f"{prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(labels.astype(np.uint8).tobytes())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--wheel", help="path to an mlxtend wheel")
    parser.add_argument("--out", default="data/mnist-subset")
    parser.add_argument("--train", type=int, default=2000)
    parser.add_argument("--test", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=20141218)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = pathlib.Path(args.wheel) if args.wheel else fetch_wheel(tmp)
        raw = gzip.decompress(zipfile.ZipFile(wheel).read(MEMBER))
    table = np.loadtxt(raw.decode().splitlines(), delimiter=",", dtype=np.int64)
    images, labels = table[:, :784], table[:, 784]

    order = np.random.default_rng(args.seed).permutation(len(labels))
    train, test = order[: args.train], order[args.train : args.train + args.test]

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_idx(out / "train", images[train], labels[train])
    write_idx(out / "t10k", images[test], labels[test])
    print(f"wrote {len(train)} training and {len(test)} test images to {out}")


if __name__ == "__main__":
    main()
