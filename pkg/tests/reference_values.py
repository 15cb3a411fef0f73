"""Known exact values used across the test suite.

pi(10^n) is OEIS A006880, pi(2^m) is OEIS A007053.  LI_MINUS_PI[n] holds
li(10^n) - pi(10^n) rounded to three decimals.
"""

PI_POW10 = {
    1: 4,
    2: 25,
    3: 168,
    4: 1229,
    5: 9592,
    6: 78498,
    7: 664579,
    8: 5761455,
    9: 50847534,
    10: 455052511,
    11: 4118054813,
    12: 37607912018,
    13: 346065536839,
    14: 3204941750802,
    15: 29844570422669,
}

PI_POW2 = {
    1: 1,
    2: 2,
    3: 4,
    4: 6,
    5: 11,
    6: 18,
    7: 31,
    8: 54,
    9: 97,
    10: 172,
    11: 309,
    12: 564,
    13: 1028,
    14: 1900,
    15: 3512,
    16: 6542,
    17: 12251,
    18: 23000,
    19: 43390,
    20: 82025,
    21: 155611,
    22: 295947,
    23: 564163,
    24: 1077871,
    25: 2063689,
    26: 3957809,
    27: 7603553,
    28: 14630843,
    29: 28192750,
    30: 54400028,
    31: 105097565,
    32: 203280221,
    33: 393615806,
    34: 762939111,
    35: 1480206279,
    36: 2874398515,
    37: 5586502348,
    38: 10866266172,
    39: 21151907950,
    40: 41203088796,
    41: 80316571436,
    42: 156661034233,
    43: 305761713237,
}

LI_MINUS_PI = {
    1: 2.166,
    2: 5.126,
    3: 9.610,
    4: 17.137,
    5: 37.809,
    6: 129.549,
    7: 339.405,
    8: 754.375,
    9: 1700.957,
    10: 3103.587,
    11: 11587.622,
    12: 38262.805,
    13: 108971.050,
}
