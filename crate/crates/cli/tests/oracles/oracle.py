"""Naive point-count oracle: Psi from spanning trees, evaluated at every point of F_q^N.

Run `python3 oracle.py` to regenerate the tree counts and counts in fixtures.json.
"""
import itertools, numpy as np, sys

def wheel(n):
    E=[(0,i) for i in range(1,n+1)]+[(i, i % n + 1) for i in range(1,n+1)]
    return n+1,E
def from_adj(rows):
    m=len(rows); return m,[(i,j) for i in range(m) for j in range(i+1,m) if rows[i][j]=="1"]
XX5=from_adj(["001111","001111","110100","111000","110001","110010"])
ST5=from_adj(["011110","101110","110001","110001","110001","001110"])
# drawn ZZ5: a..f = 0..5, edges 1..10
ZZ5=(6,[(0,1),(2,0),(1,2),(3,1),(2,3),(4,2),(3,4),(5,3),(4,5),(5,0)])

def is_tree(m,E,sub):
    p=list(range(m))
    def f(x):
        while p[x]!=x: p[x]=p[p[x]]; x=p[x]
        return x
    for i in sub:
        a,b=f(E[i][0]),f(E[i][1])
        if a==b: return False
        p[a]=b
    return True
def psi(m,E):
    N=len(E); terms=[]
    for sub in itertools.combinations(range(N),m-1):
        if is_tree(m,E,sub):
            terms.append(tuple(sorted(set(range(N))-set(sub))))
    return terms
def affine_zeros(m,E,q):
    terms=psi(m,E); N=len(E)
    pts=np.array(list(itertools.product(range(q),repeat=N)),dtype=np.int64)
    val=np.zeros(len(pts),dtype=np.int64)
    for t in terms:
        v=np.ones(len(pts),dtype=np.int64)
        for e in t: v=(v*pts[:,e])%q
        val=(val+v)%q
    return int((val==0).sum())
if __name__ == "__main__":
    for name,g in [("K4/WS3",wheel(3)),("ZZ5",ZZ5),("XX5",XX5),("ST5",ST5),("WS4",wheel(4))]:
        print(name,"trees",len(psi(*g)))
    for q in [2,3,5,7]:
        z=affine_zeros(*wheel(3),q); print("WS3 q",q,"affine",z,"proj",(z-1)//(q-1))
    for name,g in [("ZZ5",ZZ5),("XX5",XX5)]:
        for q in [2,3]:
            z=affine_zeros(*g,q); print(name,"q",q,"affine",z,"proj",(z-1)//(q-1))
