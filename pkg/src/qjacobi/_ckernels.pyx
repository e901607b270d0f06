# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled sparse-polynomial kernels over GMP rationals.

Same contract as :mod:`qjacobi._pykernels`; coefficients must be gmpy2 mpq
(anything else is converted on entry).
"""

from cython.operator cimport dereference as deref
from libc.stdint cimport int64_t
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from gmpy2 cimport mpq, mpq_t, mpq_ptr, mpq_srcptr, import_gmpy2, GMPy_MPQ_New, MPQ_Check

import gmpy2

cdef extern from "gmp.h":
    void mpq_init(mpq_ptr)
    void mpq_clear(mpq_ptr)
    void mpq_mul(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_add(mpq_ptr, mpq_srcptr, mpq_srcptr)
    void mpq_set_ui(mpq_ptr, unsigned long, unsigned long)
    int mpq_sgn(mpq_srcptr)

import_gmpy2()

cdef int SHIFT = 10
cdef int64_t MASK = 1023
cdef int NGENS = 5
cdef int64_t CBIAS = (<int64_t>512) << 50


cdef class _Accumulator:
    cdef unordered_map[int64_t, Py_ssize_t] index
    cdef vector[int64_t] keys
    cdef vector[mpq_ptr] ptrs
    cdef list objs
    cdef mpq_t tmp

    def __cinit__(self):
        self.objs = []
        mpq_init(self.tmp)

    def __dealloc__(self):
        mpq_clear(self.tmp)

    cdef inline void add_product(self, int64_t k, mpq_srcptr a, mpq_srcptr b):
        cdef unordered_map[int64_t, Py_ssize_t].iterator it = self.index.find(k)
        cdef mpq acc
        cdef Py_ssize_t idx
        if it == self.index.end():
            acc = GMPy_MPQ_New(NULL)
            mpq_mul(acc.q, a, b)
            self.index[k] = self.keys.size()
            self.keys.push_back(k)
            self.ptrs.push_back(acc.q)
            self.objs.append(acc)
        else:
            idx = deref(it).second
            mpq_mul(self.tmp, a, b)
            mpq_add(self.ptrs[idx], self.ptrs[idx], self.tmp)

    cdef dict result(self):
        cdef dict out = {}
        cdef size_t i
        for i in range(self.keys.size()):
            if mpq_sgn(self.ptrs[i]) != 0:
                out[self.keys[i]] = self.objs[i]
        return out


cdef list _unpack(dict f, vector[int64_t]& keys, vector[mpq_srcptr]& vals):
    # Returns the list of coefficient objects, which must outlive the pointers.
    cdef list keep = []
    cdef mpq v
    for k, obj in f.items():
        if MPQ_Check(obj):
            v = <mpq>obj
        else:
            v = gmpy2.mpq(obj)
        keep.append(v)
        keys.push_back(<int64_t>k)
        vals.push_back(v.q)
    return keep


def mul(dict f, dict g):
    cdef vector[int64_t] fk, gk
    cdef vector[mpq_srcptr] fv, gv
    cdef list keep_f, keep_g
    cdef _Accumulator acc = _Accumulator()
    cdef size_t i, j
    cdef int64_t off
    if len(f) < len(g):
        f, g = g, f
    keep_f = _unpack(f, fk, fv)
    keep_g = _unpack(g, gk, gv)
    acc.index.reserve(fk.size() + gk.size())
    for j in range(gk.size()):
        off = gk[j] - CBIAS
        for i in range(fk.size()):
            acc.add_product(fk[i] + off, fv[i], gv[j])
    return acc.result()


def derive(dict f, images):
    cdef vector[int64_t] fk
    cdef vector[mpq_srcptr] fv
    cdef vector[int64_t] ik[5]
    cdef vector[mpq_srcptr] iv[5]
    cdef list keep = []
    cdef _Accumulator acc = _Accumulator()
    cdef size_t m, t
    cdef int i
    cdef int64_t key, e, base
    cdef mpq_t ea, factor
    keep.append(_unpack(f, fk, fv))
    for i in range(NGENS):
        img = images[i]
        if img:
            keep.append(_unpack(img, ik[i], iv[i]))
    mpq_init(ea)
    mpq_init(factor)
    try:
        for m in range(fk.size()):
            key = fk[m]
            for i in range(NGENS):
                if ik[i].size() == 0:
                    continue
                e = (key >> (SHIFT * i)) & MASK
                if e == 0:
                    continue
                mpq_set_ui(factor, <unsigned long>e, 1)
                mpq_mul(ea, factor, fv[m])
                base = key - ((<int64_t>1) << (SHIFT * i)) - CBIAS
                for t in range(ik[i].size()):
                    acc.add_product(base + ik[i][t], ea, iv[i][t])
    finally:
        mpq_clear(ea)
        mpq_clear(factor)
    return acc.result()
