"""Closed-form obstruction values next to the quadrature oracle."""

from bilembed.obstruction import obstruction_by_quadrature, obstruction_integral

for k, l, alpha, s1, t1 in [(1, 2, 0.0, -1j, 1j), (1, 2, 0.3, -1j, 2j), (3, 2, 0.0, 1 + 1j, -1 + 2j),
                            (1, 3, 0.0, 2j, 1j)]:
    cf = obstruction_integral(k, l, alpha, s1, t1)
    qd = obstruction_by_quadrature(k, l, alpha, s1, t1)
    print(f"k={k} l={l} alpha={alpha:<4} sigma1={s1!s:8} tau1={t1!s:8} "
          f"closed {cf.value:.10f}  oracle {qd.value:.10f}  [{cf.case_tag.value}]")
