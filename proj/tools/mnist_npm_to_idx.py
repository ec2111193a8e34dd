#!/usr/bin/env python3
"""Convert the digit JSON files shipped with the npm `mnist` package into IDX.

Each <d>.json holds {"data": [...]} with 784 floats in [0, 1] per image,
concatenated. The first --train-fraction of every digit goes to the train
split, the rest to test. Output files use the standard MNIST IDX layout so
`ingest_mnist_idx` reads them unchanged.
"""
import argparse
import json
import pathlib
import struct

PIXELS = 28 * 28


def write_images(path, images):
    with open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))


def write_labels(path, labels):
    with open(path, "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("digits_dir", help="directory with 0.json .. 9.json")
    ap.add_argument("out_dir")
    ap.add_argument("--train-fraction", type=float, default=0.8)
    args = ap.parse_args()

    src = pathlib.Path(args.digits_dir)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    split = {"train": ([], []), "test": ([], [])}
    for d in range(10):
        data = json.loads((src / f"{d}.json").read_text())["data"]
        if len(data) % PIXELS:
            raise SystemExit(f"{d}.json: length {len(data)} is not a multiple of {PIXELS}")
        n = len(data) // PIXELS
        cut = int(round(n * args.train_fraction))
        for i in range(n):
            px = [min(255, max(0, round(v * 255))) for v in data[i * PIXELS:(i + 1) * PIXELS]]
            imgs, labs = split["train" if i < cut else "test"]
            imgs.append(px)
            labs.append(d)

    # Interleave classes so a prefix of the file is not a single digit.
    for name, (imgs, labs) in split.items():
        order = sorted(range(len(labs)), key=lambda i: (i * 7919) % len(labs))
        write_images(out / f"{name}-images-idx3-ubyte", [imgs[i] for i in order])
        write_labels(out / f"{name}-labels-idx1-ubyte", [labs[i] for i in order])
        print(f"{name}: {len(labs)} images")


if __name__ == "__main__":
    main()
