"""Prime fields F_p and roots of unity."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NoSuchRoot, NotPrime

# keeps every einsum/matmul partial sum far from int64 overflow
MAX_PRIME = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The prime field F_p. Scalars are plain ints in ``[0, p)``."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise NotPrime(f"{self.p} exceeds the supported prime bound {MAX_PRIME}")

    def __call__(self, x: int) -> int:
        return int(x) % self.p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.p

    def neg(self, x: int) -> int:
        return (-x) % self.p

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(int(x), -1, self.p)

    def div(self, x: int, y: int) -> int:
        return (x * self.inv(y)) % self.p

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(x), -e, self.p)
        return pow(int(x), e, self.p)

    def order(self, x: int) -> int:
        """Multiplicative order of a nonzero scalar."""
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        n, y = 1, x
        while y != 1:
            y = (y * x) % self.p
            n += 1
        return n


def make_field(p: int) -> Field:
    return Field(int(p))


def primitive_root_of_unity(field: Field, b: int) -> int:
    """Smallest q in F_p with multiplicative order exactly ``b``."""
    if b < 1 or (field.p - 1) % b:
        raise NoSuchRoot(f"{b} does not divide p - 1 = {field.p - 1}")
    for q in range(1, field.p):
        if pow(q, b, field.p) == 1 and field.order(q) == b:
            return q
    raise NoSuchRoot(f"no primitive {b}th root of unity mod {field.p}")  # pragma: no cover


def root_order(a: int, p: int) -> int:
    """b = a / gcd(a, char k): the order the commutator must have."""
    return a // gcd(a, p)


def default_prime(a: int, lower: int = 101) -> int:
    """Smallest prime p >= lower with p = 1 (mod a) and gcd(p, a) = 1."""
    p = lower
    while True:
        if is_prime(p) and (p - 1) % a == 0 and gcd(p, a) == 1:
            return p
        p += 1
