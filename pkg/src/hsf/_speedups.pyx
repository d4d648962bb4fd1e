# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scan kernel; behavioral twin of hsf._pykernel."""

BACKEND = "c"

URL_SPAN = -2

cdef frozenset _STOP = frozenset((
    0x20, 0x09, 0x0A, 0x0D, 0x0B, 0x0C, 0x3000,
    0xFF0C, 0x3002, 0xFF1B, 0x3001,
    0x201C, 0x201D, 0xFF08, 0xFF09,
))


cdef inline bint _is_label_cp(Py_UCS4 cp):
    return (48 <= cp <= 57) or (65 <= cp <= 90) or (97 <= cp <= 122) or cp == 45


cdef Py_ssize_t _url_len(unicode text, Py_ssize_t pos):
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = pos, j, k
    cdef int labels = 0
    if text.startswith("https://", i):
        i += 8
    elif text.startswith("http://", i):
        i += 7
    j = i
    while True:
        k = j
        while k < n and _is_label_cp(text[k]):
            k += 1
        if k == j:
            break
        labels += 1
        if k < n and text[k] == u"." and k + 1 < n and _is_label_cp(text[k + 1]):
            j = k + 1
        else:
            j = k
            break
    if labels < 2:
        return 0
    i = j
    if i < n and text[i] == u"/":
        i += 1
        while i < n and ord(text[i]) not in _STOP:
            i += 1
    return i - pos


def url_match_len(unicode text, Py_ssize_t pos):
    return _url_len(text, pos)


def scan_layer1(list ex_children, list ex_terminal, fo_children, fo_terminal,
                unicode text, bint try_url):
    cdef list spans = []
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = 0, j, best_end, ulen
    cdef int best_cls, t
    cdef object nxt
    cdef Py_ssize_t node
    cdef long cp
    cdef bint has_fold = fo_children is not None
    cdef list fch = fo_children if has_fold else None
    cdef list fte = fo_terminal if has_fold else None
    while i < n:
        best_cls = -1
        best_end = i
        node = 0
        j = i
        while j < n:
            cp = ord(text[j])
            nxt = (<dict>ex_children[node]).get(cp)
            if nxt is None:
                break
            node = <Py_ssize_t>nxt
            j += 1
            t = <int>ex_terminal[node]
            if t >= 0:
                best_cls = t
                best_end = j
        if has_fold:
            node = 0
            j = i
            while j < n:
                cp = ord(text[j])
                if 65 <= cp <= 90:
                    cp += 32
                nxt = (<dict>fch[node]).get(cp)
                if nxt is None:
                    break
                node = <Py_ssize_t>nxt
                j += 1
                t = <int>fte[node]
                if t >= 0 and j > best_end:
                    best_cls = t
                    best_end = j
        if best_cls >= 0:
            spans.append((i, best_end, best_cls))
            i = best_end
            continue
        if try_url and _is_label_cp(text[i]):
            ulen = _url_len(text, i)
            if ulen > 0:
                spans.append((i, i + ulen, URL_SPAN))
                i += ulen
                continue
        i += 1
    return spans
