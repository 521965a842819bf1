//! High-precision reference values shared by the integration tests.

/// `(x, Φ(x))` on 100 equally spaced points of [−9, 9], from 50-digit arithmetic.
pub const NORMAL_CDF: [(f64, f64); 100] = [
    (-9.0, 1.1285884059538405e-19),
    (-8.818181818181818, 5.816662209259386e-19),
    (-8.636363636363637, 2.9015297352764863e-18),
    (-8.454545454545455, 1.4008831853077635e-17),
    (-8.272727272727273, 6.546448083179196e-17),
    (-8.090909090909092, 2.9610522327742747e-16),
    (-7.909090909090909, 1.2963761625827948e-15),
    (-7.7272727272727275, 5.493754285806265e-15),
    (-7.545454545454545, 2.2535634821851177e-14),
    (-7.363636363636363, 8.948339850864447e-14),
    (-7.181818181818182, 3.4395183590035676e-13),
    (-7.0, 1.279812543885835e-12),
    (-6.818181818181818, 4.6099955192965555e-12),
    (-6.636363636363637, 1.6075804877910435e-11),
    (-6.454545454545455, 5.4272098036948665e-11),
    (-6.272727272727273, 1.7738901765717702e-10),
    (-6.090909090909091, 5.613564794799658e-10),
    (-5.909090909090909, 1.7200041644923873e-09),
    (-5.727272727272727, 5.102901344537848e-09),
    (-5.545454545454545, 1.4659574876468146e-08),
    (-5.363636363636363, 4.078151198526368e-08),
    (-5.181818181818182, 1.0986667827383749e-07),
    (-5.0, 2.866515718791939e-07),
    (-4.818181818181818, 7.243616303279157e-07),
    (-4.636363636363637, 1.7729596758898934e-06),
    (-4.454545454545454, 4.203555853963158e-06),
    (-4.2727272727272725, 9.654828838923033e-06),
    (-4.090909090909091, 2.148427752549511e-05),
    (-3.909090909090909, 4.632204910861284e-05),
    (-3.7272727272727275, 9.678148557600763e-05),
    (-3.545454545454546, 0.00019596828924988387),
    (-3.3636363636363633, 0.0003846141201497394),
    (-3.1818181818181817, 0.0007317683223925914),
    (-3.0, 0.0013498980316300946),
    (-2.8181818181818183, 0.0024148226279699686),
    (-2.6363636363636367, 0.004189993720506825),
    (-2.454545454545454, 0.007053141473689783),
    (-2.2727272727272725, 0.011521310043880933),
    (-2.090909090909091, 0.018268107011540646),
    (-1.9090909090909092, 0.028125182640983425),
    (-1.7272727272727275, 0.04205934739895675),
    (-1.5454545454545459, 0.06111817772400583),
    (-1.3636363636363633, 0.08634102070937426),
    (-1.1818181818181817, 0.11863892593413916),
    (-1.0, 0.15865525393145705),
    (-0.8181818181818183, 0.20662668774682016),
    (-0.6363636363636367, 0.2622697182176564),
    (-0.45454545454545503, 0.3247181418633771),
    (-0.2727272727272734, 0.39253143427377946),
    (-0.09090909090909172, 0.46378241330310527),
    (0.09090909090909172, 0.5362175866968947),
    (0.2727272727272734, 0.6074685657262205),
    (0.45454545454545503, 0.6752818581366229),
    (0.6363636363636367, 0.7377302817823436),
    (0.8181818181818183, 0.7933733122531799),
    (1.0, 0.8413447460685429),
    (1.1818181818181817, 0.8813610740658608),
    (1.3636363636363633, 0.9136589792906258),
    (1.545454545454545, 0.938881822275994),
    (1.7272727272727266, 0.9579406526010431),
    (1.9090909090909083, 0.9718748173590165),
    (2.0909090909090917, 0.9817318929884594),
    (2.2727272727272734, 0.9884786899561191),
    (2.454545454545455, 0.9929468585263103),
    (2.6363636363636367, 0.9958100062794931),
    (2.8181818181818183, 0.99758517737203),
    (3.0, 0.9986501019683699),
    (3.1818181818181817, 0.9992682316776074),
    (3.3636363636363633, 0.9996153858798502),
    (3.545454545454545, 0.9998040317107502),
    (3.7272727272727266, 0.999903218514424),
    (3.9090909090909083, 0.9999536779508914),
    (4.090909090909092, 0.9999785157224745),
    (4.272727272727273, 0.999990345171161),
    (4.454545454545455, 0.999995796444146),
    (4.636363636363637, 0.9999982270403242),
    (4.818181818181818, 0.9999992756383697),
    (5.0, 0.9999997133484281),
    (5.181818181818182, 0.9999998901333217),
    (5.363636363636363, 0.999999959218488),
    (5.545454545454545, 0.9999999853404251),
    (5.727272727272727, 0.9999999948970987),
    (5.909090909090908, 0.9999999982799959),
    (6.090909090909092, 0.9999999994386435),
    (6.272727272727273, 0.999999999822611),
    (6.454545454545455, 0.9999999999457279),
    (6.636363636363637, 0.9999999999839242),
    (6.818181818181818, 0.99999999999539),
    (7.0, 0.9999999999987201),
    (7.181818181818183, 0.999999999999656),
    (7.363636363636363, 0.9999999999999105),
    (7.545454545454547, 0.9999999999999775),
    (7.727272727272727, 0.9999999999999946),
    (7.90909090909091, 0.9999999999999987),
    (8.09090909090909, 0.9999999999999997),
    (8.272727272727273, 0.9999999999999999),
    (8.454545454545453, 1.0),
    (8.636363636363637, 1.0),
    (8.818181818181817, 1.0),
    (9.0, 1.0),
];

/// `(θ, Z(θ), Z′(θ), Z″(θ))` from 50-digit arithmetic.
pub const ZETA: [(f64, f64, f64, f64); 5] = [
    (1.1, 10.58444846495081, -99.92816307577073, 1999.9901157470433),
    (1.5, 2.612375348685488, -3.9322397374311016, 15.989556371225687),
    (2.0, 1.6449340668482264, -0.9375482543158438, 1.989280234298901),
    (3.0, 1.2020569031595942, -0.19812624288563685, 0.2397469173053872),
    (5.0, 1.03692775514337, -0.02857378050946295, 0.023731344783033084),
];

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;
