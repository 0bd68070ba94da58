"""GF(2) linear algebra on int bitsets."""

from __future__ import annotations


def low_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def row_reduce(rows) -> tuple[list[int], list[int]]:
    """Row-reduce int bitsets; returns (rows, pivot bit per row), lowest pivot first."""
    basis: list[int] = []
    pivots: list[int] = []
    for row in rows:
        for b, p in zip(basis, pivots):
            if (row >> p) & 1:
                row ^= b
        if row:
            basis.append(row)
            pivots.append(low_bit(row))
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    basis = [basis[i] for i in order]
    pivots = [pivots[i] for i in order]
    for i in range(len(basis)):  # back-substitute for a reduced echelon basis
        for j in range(len(basis)):
            if i != j and (basis[j] >> pivots[i]) & 1:
                basis[j] ^= basis[i]
    return basis, pivots


def reduce_vector(vec: int, basis, pivots) -> int:
    for b, p in zip(basis, pivots):
        if (vec >> p) & 1:
            vec ^= b
    return vec


def rank(rows) -> int:
    return len(row_reduce(rows)[0])


def kernel_and_complement(columns) -> tuple[list[int], list[int]]:
    """Kernel and a complement for the map x -> XOR of columns[i] over bits of x.

    Returns (kernel_basis, complement_basis), both as bitsets over the domain
    indices; the complement vectors have independent images, so the domain is
    their span plus the kernel.
    """
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, image, marker)
    kernel: list[int] = []
    complement: list[int] = []
    for i, img in enumerate(columns):
        mark = 1 << i
        for p, pimg, pmark in pivots:
            if (img >> p) & 1:
                img ^= pimg
                mark ^= pmark
        if img == 0:
            kernel.append(mark)
        else:
            pivots.append((low_bit(img), img, mark))
            complement.append(1 << i)
    kernel_basis, _ = row_reduce(kernel)
    return kernel_basis, complement
