"""Copy, compare and delete diagrams: spider normal forms against their relations."""

from moncomp import diagram as dg

A = "A"
frobenius_left = (dg.Copy(A) @ dg.Id((A,))) >> (dg.Id((A,)) @ dg.Compare(A))
frobenius_right = dg.Compare(A) >> dg.Copy(A)

for name, d in [("(copy x id) ; (id x compare)", frobenius_left), ("compare ; copy", frobenius_right)]:
    nf = dg.spider_normalize(d)
    rel = dg.finrel_eval(d, 2)
    print(f"{name}: blocks {nf.to_json()['blocks']}, {len(rel.pairs)} related pairs at carrier 2")

print("same normal form:", dg.spider_normalize(frobenius_left) == dg.spider_normalize(frobenius_right))
loop = dg.Copy(A) >> dg.Compare(A)
print("copy then compare is the identity at carrier 3:", dg.finrel_eval(loop, 3) == dg.finrel_eval(dg.Id((A,)), 3))
