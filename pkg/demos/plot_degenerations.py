"""
Degenerations of the closed six-walk
====================================

H1 has 18 vertices and 12 triples.  Identifying vertices and closing under
the forcing rule gives a finite family of quotients; this script counts them
and finds the ones with v - e = 5.  It takes under a minute.
"""

from collections import Counter

from latinlab import build_H1, d_value, enumerate_degenerations, stability_margin

H = build_H1()
print("v, e, d:", H.v, H.e, d_value(H), "margin:", stability_margin(H))

records = enumerate_degenerations()
print("closed quotients:", len(records))
print("classes, roles fixed:", len({r.canon for r in records}))
print("classes, roles permutable:", len({r.canon_roles for r in records}))

###############################################################################
# Classes by v - e.  Only H1 itself reaches 6.

reps = {r.canon: r for r in records}
print(sorted(Counter(r.v - r.e for r in reps.values()).items()))
for r in sorted(reps.values(), key=lambda r: (r.e, r.canon)):
    if r.v - r.e == 5:
        print(r.v, r.e, stability_margin(r.quotient), r.canon)
