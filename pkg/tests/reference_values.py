"""Published values the pipeline is checked against."""


def span(lo, hi, step=1):
    return list(range(lo, hi + 1, step))


TABLE1 = {5: 61367, 7: 1316, 8: 756, 9: 541}

# q -> (omega threshold, r threshold); q = 3 counts even r only
TABLE2 = {9: (27, 39), 8: (28, 44), 7: (31, 52), 5: (46, 104), 4: (120, 391), 3: (73, 276)}

# q -> ((first checked r, last checked r), eliminated r)
TABLE3 = {
    9: ((2, 38), [13, 16, 17] + span(19, 38)),
    8: ((2, 43), [13, 15, 17, 18, 19] + span(21, 43)),
    7: ((2, 51), [17, 19, 21, 22, 23] + span(25, 51)),
    5: ((2, 103), [29, 31, 33, 37, 39, 41, 43, 45, 46, 47] + span(49, 103)),
    4: (
        (2, 390),
        [89, 97, 101, 103, 107, 109, 113, 119, 121, 125, 127, 129, 131, 133, 137, 139]
        + span(141, 143) + span(145, 149) + span(151, 153) + [155] + span(157, 161)
        + span(163, 167) + span(169, 179) + span(181, 209) + span(211, 390),
    ),
}

TABLE4 = {
    9: ((2, 18), [14, 16, 18]),
    8: ((2, 20), [14]),
    7: ((2, 24), [22, 24]),
    5: ((2, 48), [26, 28] + span(32, 48, 2)),
    4: ((2, 210), [34, 38, 40] + span(44, 210, 2)),
    3: ((4, 268), [86, 106, 110, 116, 118] + [r for r in span(122, 268, 2) if r != 144]),
}

TABLE5 = {
    9: ((2, 15), [2, 3, 4, 5, 7, 11, 13, 14]),
    8: ((2, 20), [2, 3, 4, 5, 7, 9, 11, 13, 17, 18, 19]),
    7: ((2, 20), [2, 13, 19]),
    5: ((2, 35), []),
    4: ((2, 135), [2]),
    3: ((2, 144), []),
}

# q -> r values that may still be exceptions (for q = 3, the even ones)
POSSIBLE = {
    9: [6, 8, 9, 10, 12, 15],
    8: [6, 8, 10, 12, 16, 20],
    7: span(3, 12) + [14, 15, 16, 18, 20],
    5: span(2, 25) + [27, 30, 35],
    4: span(3, 33) + [35, 36, 37, 39, 41, 42, 43, 45] + span(47, 87, 2)
    + [91, 93, 95, 99, 105, 111, 115, 117, 123, 135],
    3: span(2, 84, 2) + span(88, 104, 2) + [108, 112, 114, 120, 144],
}

GENUINE = {(3, 2), (5, 2), (3, 3)}
