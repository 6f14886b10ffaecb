from dbg_persist.unionfind import UnionFind


def test_union_and_components():
    uf = UnionFind("abcde")
    assert uf.num_components == 5
    assert uf.union("a", "b")
    assert uf.union("c", "d")
    assert not uf.union("b", "a")
    assert uf.num_components == 3
    assert set(uf.components()) == {frozenset("ab"), frozenset("cd"), frozenset("e")}


def test_items_registered_on_first_use():
    uf = UnionFind()
    uf.union_all(["x", "y", "z"])
    uf.union_all([])
    assert uf.num_components == 1
    assert uf.find("z") == uf.find("x")
    uf.add("w")
    assert uf.num_components == 2


def test_long_chain_compresses():
    uf = UnionFind(range(100))
    for i in range(99):
        uf.union(i + 1, i)
    root = uf.find(0)
    assert all(uf.parents[i] == root for i in range(100))
