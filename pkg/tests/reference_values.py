"""High-precision reference values (50-digit mpmath, tools/freeze_references.py)."""

FIXTURE = dict(S=1362.18, r=0.0011154, alpha=43.307, eta=0.089896)

# (y, delta, x, cdf including the atom at 0, survival function)
NCX2 = [
    (1.0, 0.0, 1.0, 0.73287980379682021825, 0.26712019620317978175),
    (0.5, 0.0, 3.0, 0.304093969956486112, 0.695906030043513888),
    (10.0, 0.0, 4.0, 0.91393447760021258483, 0.08606552239978741517),
    (3.0, 2.0, 0.0, 0.77686983985157017107, 0.22313016014842982893),
    (5.0, 2.0, 2.5, 0.6464468209074371931, 0.3535531790925628069),
    (8.0, 4.0, 1.0, 0.83004234683321514971, 0.16995765316678485029),
    (30.0, 4.0, 20.0, 0.75823432401893718835, 0.24176567598106281165),
    (80.0, 0.0, 0.5, 0.99999999999999997689, 2.3105243562625986237e-17),
    (0.001, 4.0, 2.0, 4.5977266470431536761e-8, 0.99999995402273352957),
    (150.0, 6.0, 120.0, 0.85926597074944084806, 0.14073402925055915194),
    (2.0, 6.0, 40.0, 6.0775343559796900041e-9, 0.99999999392246564402),
]

# (K/S, T, call, put, zcb, ln of the out-of-the-money price)
PRICES = [
    (1.0, 1.0, 99.745360780093175089, 98.226832248890640446, 0.99888522182736309838, 4.5872794188606786462),
    (0.7, 0.5, 409.44452567258794057, 0.25889248208251027854, 0.99944245548573885785, -1.3513424305662603093),
    (1.3, 2.0, 28.784344422602511889, 433.49237091007546414, 0.99777168638476158234, 3.3598316429023785199),
    (0.5, 10.0, 778.57957588054722281, 76.043440710370721598, 0.96851203927502018645, 4.3313047652863153619),
    (2.0, 10.0, 72.910884053811095865, 1349.306343373105091, 0.96851203927502018645, 4.2892379290199771394),
    (1.0, 100.0, 1361.3212426501890044, 0.00027080644540642321432, 0.00063062749141552660047, -8.2141062158562880967),
    (0.8, 0.001, 272.43721549977965515, 6.6045180778678780782e-308, 0.99999888460062205835, -707.30845467008342091),
    (1.25, 0.001, 4.5245418638147384379e-384, 340.5431007815941943, 0.99999888460062205835, -882.68315938325313515),
]

# (K/S, T, implied vol)
IMPLIED_VOLS = [
    (1.0, 1.0, 0.18250133847173751432),
    (0.5, 1.0, 0.21597546165096150862),
    (2.0, 5.0, 0.1681116974764633031),
    (1.0, 0.0001, 0.17830470479519702487),
    (0.5, 400.0, 0.18063306569446111911),
    (1.0, 400.0, 0.17896740936823360401),
    (2.0, 400.0, 0.17728592308643386145),
]
