"""Word-RAM kernels over packed fixed-width fields.

Values live in fields of ``2*log2(w) + 1`` bits; the top bit of every field
is a control bit that is zero at rest and absorbs borrows during field-wise
subtraction.  Fields are numbered LSB-first, so field ``i`` of a word is
``(word >> i*field_width) & field_mask``.

Each kernel takes an optional ``ops`` mapping (usually a
:class:`collections.Counter`) and adds the number of word operations it
performed under the ``"word_ops"`` key.  Costs are tallied per stage, not per
Python statement, so the numbers match the shape of the code below.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ElementNotFoundError, FieldRangeError, LayoutMismatchError

__all__ = [
    "Layout",
    "LAYOUT64",
    "LAYOUT32",
    "get_layout",
    "PackedList",
    "pack_fields",
    "merge_sorted_words",
    "find_duplicates",
    "insert_field",
    "delete_field",
    "msb_index",
]


def _repeat(pattern, width, count):
    out = 0
    for i in range(count):
        out |= pattern << (i * width)
    return out


@dataclass(frozen=True)
class Layout:
    """Field geometry for a ``w``-bit word (``w`` is 64 or 32)."""

    w: int = 64
    log_w: int = field(init=False)
    field_width: int = field(init=False)
    fields_per_word: int = field(init=False)

    def __post_init__(self):
        if self.w not in (32, 64):
            raise ValueError(f"unsupported word size {self.w}; use 64 or 32")
        log_w = self.w.bit_length() - 1
        f = 2 * log_w + 1
        k = self.w // f
        set_ = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        set_("log_w", log_w)
        set_("field_width", f)
        set_("fields_per_word", k)
        # bitonic merging needs 2k fields to be a power of two
        assert k & (k - 1) == 0

        set_("value_max", (1 << (f - 1)) - 1)
        set_("field_mask", (1 << f) - 1)
        set_("word_mask", (1 << self.w) - 1)
        set_("k_bits", k * f)
        set_("k_mask", (1 << (k * f)) - 1)
        ones = _repeat(1, f, k)
        set_("ones", ones)
        set_("control", ones << (f - 1))
        set_("values", ones * ((1 << (f - 1)) - 1))
        set_("pad_word", ones * ((1 << (f - 1)) - 1))
        set_("prefix", tuple((1 << (j * f)) - 1 for j in range(k + 1)))

        # field reversal inside one word: swap blocks of s fields, s = k/2 .. 1
        rev = []
        s = k // 2
        while s:
            block = _repeat((1 << (s * f)) - 1, 2 * s * f, k // (2 * s))
            rev.append((s * f, block))
            s //= 2
        set_("reverse_steps", tuple(rev))

        # bitonic half-cleaners on a 2k-field register, distance k .. 1
        stages = []
        dist = k
        while dist:
            vals = 0
            for i in range(2 * k):
                if not i & dist:
                    vals |= ((1 << (f - 1)) - 1) << (i * f)
            ctrl = 0
            for i in range(2 * k):
                if not i & dist:
                    ctrl |= 1 << (i * f + f - 1)
            stages.append((dist * f, vals, ctrl))
            dist //= 2
        set_("merge_stages", tuple(stages))

        # repeated halving of the value bits down to one bit per field
        halving = []
        width = f - 1
        while width > 1:
            half = (width + 1) // 2
            halving.append((half, _repeat((1 << half) - 1, f, k)))
            width = half
        set_("halving_steps", tuple(halving))

        # word-op tallies, mirroring the kernels below
        set_("merge_cost", 4 + 5 * len(rev) + 14 * len(stages))
        set_("dup_word_cost", 10 + 3 * len(halving))
        set_("locate_cost", 5)
        set_("shift_insert_cost", 8)


LAYOUT64 = Layout(64)
LAYOUT32 = Layout(32)


def get_layout(w):
    if isinstance(w, Layout):
        return w
    if w == 64:
        return LAYOUT64
    if w == 32:
        return LAYOUT32
    return Layout(w)


@dataclass(frozen=True)
class PackedList:
    """Sorted values packed ``fields_per_word`` to a word; tail fields are zero."""

    words: tuple
    length: int
    layout: Layout = LAYOUT64

    def __len__(self):
        return self.length

    def field(self, index):
        L = self.layout
        if not 0 <= index < self.length:
            raise IndexError(index)
        word = self.words[index // L.fields_per_word]
        return (word >> ((index % L.fields_per_word) * L.field_width)) & L.field_mask

    def values(self):
        """Unpack to a plain list (scalar path, for checks and debugging)."""
        L = self.layout
        f, k = L.field_width, L.fields_per_word
        out = []
        for i in range(self.length):
            out.append((self.words[i // k] >> ((i % k) * f)) & L.field_mask)
        return out

    def control_bits(self):
        """OR of the control bits over all words; zero for a list at rest."""
        acc = 0
        for word in self.words:
            acc |= word & self.layout.control
        return acc

    @classmethod
    def empty(cls, layout=LAYOUT64):
        return cls((), 0, layout)


def _check_value(v, L):
    if not 0 <= v <= L.value_max:
        raise FieldRangeError(f"value {v} does not fit in {L.field_width - 1} bits")


def pack_fields(values, layout=LAYOUT64):
    L = get_layout(layout)
    f, k = L.field_width, L.fields_per_word
    words = []
    prev = -1
    for i, v in enumerate(values):
        _check_value(v, L)
        if v < prev:
            raise ValueError("values must be sorted ascending")
        prev = v
        if i % k == 0:
            words.append(0)
        words[-1] |= v << ((i % k) * f)
    return PackedList(tuple(words), len(values), L)


def _count(ops, n):
    if ops is not None:
        ops["word_ops"] += n


# ---------------------------------------------------------------------------
# merging


def _reverse_fields(x, L):
    for shift, block in L.reverse_steps:
        x = ((x & block) << shift) | ((x >> shift) & block)
    return x


def _merge_word_pair(x, y, L):
    """Merge two sorted full words; returns (low word, high word)."""
    g = L.field_width - 1
    # ascending x below reversed y forms a bitonic register of 2k fields
    r = x | (_reverse_fields(y, L) << L.k_bits)
    for shift, vals, ctrl in L.merge_stages:
        a = r & vals
        b = (r >> shift) & vals
        ge = ((a | ctrl) - b) & ctrl
        sel = ge - (ge >> g)
        diff = (a ^ b) & sel
        r = (a ^ diff) | ((b ^ diff) << shift)
    return r & L.k_mask, r >> L.k_bits


def _padded_words(p):
    """Words of ``p`` with unoccupied tail fields set to the largest value."""
    L = p.layout
    words = list(p.words)
    used = p.length % L.fields_per_word
    if used:
        words[-1] |= L.pad_word & ~L.prefix[used]
    return words


def merge_sorted_words(a, b, ops=None):
    """Sorted multiset union of two packed lists.

    Words are merged pairwise with a bitonic network; the next input word is
    picked by comparing the head fields of the two remaining runs, and the
    low half of each merged pair is final.
    """
    if a.layout != b.layout:
        raise LayoutMismatchError("packed lists use different layouts")
    L = a.layout
    if a.length == 0:
        return b
    if b.length == 0:
        return a
    A = _padded_words(a)
    B = _padded_words(b)
    fm = L.field_mask
    lo, hi = _merge_word_pair(A[0], B[0], L)
    out = [lo]
    i = j = 1
    na, nb = len(A), len(B)
    pairs = 1
    while i < na or j < nb:
        if j >= nb or (i < na and (A[i] & fm) <= (B[j] & fm)):
            nxt = A[i]
            i += 1
        else:
            nxt = B[j]
            j += 1
        lo, hi = _merge_word_pair(hi, nxt, L)
        out.append(lo)
        pairs += 1
    out.append(hi)
    _count(ops, pairs * (L.merge_cost + 2) + 4)
    n = a.length + b.length
    k = L.fields_per_word
    nwords = -(-n // k)
    del out[nwords:]
    used = n % k
    if used:
        out[-1] &= L.prefix[used]
    return PackedList(tuple(out), n, L)


# ---------------------------------------------------------------------------
# duplicates


def find_duplicates(c, ops=None, msb=None):
    """Indices ``i >= 1`` whose field equals field ``i - 1``.

    ``c`` must be sorted; on unsorted input the result is unspecified.
    """
    L = c.layout
    f, k = L.field_width, L.fields_per_word
    top_shift = (k - 1) * f
    msb = msb or _msb_native
    out = []
    carry = 0
    n = c.length
    nwords = len(c.words)
    for wi, word in enumerate(c.words):
        shifted = ((word << f) & L.k_mask) | carry
        zero = ((word | L.control) - shifted) & L.values
        for shift, mask in L.halving_steps:
            zero = (zero | (zero >> shift)) & mask
        hits = ~zero & L.ones
        if wi == 0:
            hits &= ~1
        if wi == nwords - 1:
            used = n - wi * k
            hits &= L.prefix[used]
        base = wi * k
        found = []
        while hits:
            bit = msb(hits)
            found.append(base + bit // f)
            hits ^= 1 << bit
        found.reverse()
        out.extend(found)
        carry = word >> top_shift
        _count(ops, L.dup_word_cost + 3 * len(found))
    return out


# ---------------------------------------------------------------------------
# single-value updates


def _locate(words, length, v, L, ops):
    """(word index, field index) of the first field >= v, or the end slot."""
    k, f = L.fields_per_word, L.field_width
    bcast = v * L.ones
    for wi, word in enumerate(words):
        used = min(k, length - wi * k)
        occ = L.control & L.prefix[used]
        ge = ((word | L.control) - bcast) & occ
        _count(ops, L.locate_cost)
        if ge:
            below = ~ge & occ
            pos = msb_index(below) // f + 1 if below else 0
            return wi, pos
    if length % k == 0:
        return len(words), 0
    return len(words) - 1, length % k


def insert_field(c, v, ops=None):
    """Insert ``v`` at its successor position; returns a new list."""
    L = c.layout
    _check_value(v, L)
    k, f = L.fields_per_word, L.field_width
    words = list(c.words)
    wi, pos = _locate(words, c.length, v, L, ops)
    if wi == len(words):
        words.append(v)
        return PackedList(tuple(words), c.length + 1, L)
    top_shift = (k - 1) * f
    full_last = c.length % k == 0
    carry = v
    for j in range(wi, len(words)):
        word = words[j]
        out_field = word >> top_shift
        low = word & L.prefix[pos]
        high = word & ~L.prefix[pos]
        words[j] = low | (carry << (pos * f)) | ((high << f) & L.k_mask)
        carry = out_field
        pos = 0
        _count(ops, L.shift_insert_cost)
    if full_last:
        words.append(carry)
    return PackedList(tuple(words), c.length + 1, L)


def delete_field(c, v, ops=None):
    """Remove one occurrence of ``v``; raises if absent."""
    L = c.layout
    k, f = L.fields_per_word, L.field_width
    words = list(c.words)
    wi, pos = _locate(words, c.length, v, L, ops)
    idx = wi * k + pos
    if idx >= c.length or (words[wi] >> (pos * f)) & L.field_mask != v:
        raise ElementNotFoundError(v)
    top_shift = (k - 1) * f
    fm = L.field_mask
    for j in range(wi, len(words)):
        word = words[j]
        low = word & L.prefix[pos]
        high = (word >> ((pos + 1) * f)) << (pos * f)
        incoming = words[j + 1] & fm if j + 1 < len(words) else 0
        words[j] = low | high | (incoming << top_shift)
        pos = 0
        _count(ops, L.shift_insert_cost)
    n = c.length - 1
    if n % k == 0:
        words.pop()
    return PackedList(tuple(words), n, L)


# ---------------------------------------------------------------------------
# most significant bit

_MASK64 = (1 << 64) - 1
_BYTE_HIGH = _repeat(0x80, 8, 8)
_GATHER = _repeat(1, 7, 8)
_BYTE_MSB = [0] + [b.bit_length() - 1 for b in range(1, 256)]


def _msb_native(x):
    return x.bit_length() - 1


def _msb_multiply(x):
    # Nonzero bytes are flagged in their top bit, gathered into one byte with
    # a single multiplication, then resolved by two byte-table lookups.
    if x >> 64:
        raise ValueError("multiplication msb handles at most 64 bits")
    low = x & ~_BYTE_HIGH
    flags = (x | ~(_BYTE_HIGH - low)) & _BYTE_HIGH
    summary = ((flags * _GATHER) & _MASK64) >> 56
    byte = _BYTE_MSB[summary]
    return 8 * byte + _BYTE_MSB[(x >> (8 * byte)) & 0xFF]


def msb_index(x, method="native"):
    """Index of the highest set bit of ``x``.

    ``method="multiply"`` uses the constant-time multiplication route instead
    of the interpreter's native bit length; both agree on every input.
    """
    if x <= 0:
        raise ValueError("msb_index is undefined for 0")
    if method == "native":
        return x.bit_length() - 1
    if method == "multiply":
        return _msb_multiply(x)
    raise ValueError(f"unknown msb method {method!r}")
