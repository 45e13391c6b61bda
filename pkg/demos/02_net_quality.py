"""
How good are the nets?
======================

The first 2^m points form a digital net.  Its dual net collects the Walsh
frequencies the net cannot average out, and the smallest weights in the dual
measure quality: mu1 gives the classical t-value, v is the weight that suits
the triangle construction.
"""

from triqmc import basu_owen_pair, dual_net, min_weights, pascal_pair, quality_table

for gen in (basu_owen_pair(), pascal_pair()):
    print(gen.kind)
    print("  m  n  mu1_min  v_min  t  bound")
    for row in quality_table(gen, range(1, 11)):
        print("  {m:<2} {n:<2} {mu1_min:<8} {v_min:<6} {t:<2} {bound_holds}".format(**row))

# The weight spectrum of one dual: how many dual elements sit at each v.
rep = min_weights(dual_net(basu_owen_pair(), 6, 6))
print("basu-owen m=6 spectrum of v:", rep.spectrum)
