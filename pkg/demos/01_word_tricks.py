# Packed fields: several small sorted values living in one machine word.
# %%
from collections import Counter

from setix.word_ops import LAYOUT64, find_duplicates, insert_field, merge_sorted_words, msb_index, pack_fields

L = LAYOUT64
print("field width", L.field_width, "fields per word", L.fields_per_word, "max value", L.value_max)

# %%
a = pack_fields([3, 9, 20, 41, 77], L)
b = pack_fields([9, 12, 41, 90], L)
print([hex(w) for w in a.words])  # five values need two words

# %% merge two sorted packed lists with a bitonic network per word pair
ops = Counter()
m = merge_sorted_words(a, b, ops)
print(m.values())
print("word operations:", ops["word_ops"])

# %% equal neighbours in the merged list are the common values
dups = find_duplicates(m, ops)
print("duplicate positions", dups, "values", [m.field(i) for i in dups])

# %% keep a list sorted under insertion
c = insert_field(a, 10)
print(c.values())

# %% the highest set bit, natively and by one multiplication plus byte tables
for x in (1, 0x80, 0xDEADBEEF, 2**63 + 5):
    print(hex(x), msb_index(x), msb_index(x, "multiply"))
