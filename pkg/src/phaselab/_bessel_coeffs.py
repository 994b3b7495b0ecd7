"""Frozen Chebyshev tables for :mod:`phaselab.specialfun`.

Generated by tools/gen_bessel_coeffs.py; do not edit by hand.
"""

SMALL = 8.0
MID = 25.0

J0_SMALL = (
    1.5772797147489011956e-1,
    -8.7234423528522212908e-3,
    2.6517861320333680987e-1,
    -3.7009499387264977903e-1,
    1.5806710233209726128e-1,
    -3.4893769411408885163e-2,
    4.8191800694676044968e-3,
    -4.606261662062750475e-4,
    3.2460328821005080806e-5,
    -1.7619469077621507495e-6,
    7.608163592418781867e-8,
    -2.6792535305576728983e-9,
    7.8486963144794644165e-11,
    -1.9438346867370165706e-12,
    4.1253205956343739326e-14,
    -7.5885081254475463376e-16,
    1.2218515873961411034e-17,
    -1.7367896077002367683e-19,
)
J1X_SMALL = (
    8.1044846325658115105e-2,
    -1.4897514506765210906e-1,
    1.6099926235720970255e-1,
    -8.2680491766817906597e-2,
    2.221363965496603541e-2,
    -3.6469406007692759578e-3,
    4.0503377283548218331e-4,
    -3.2555548668572585168e-5,
    1.9858774049915167414e-6,
    -9.5219847567504361821e-8,
    3.6871337590971482385e-9,
    -1.1780266226958848398e-10,
    3.1601545803480033215e-12,
    -7.2217552396517734285e-14,
    1.4232144003513942316e-15,
    -2.4441972916190463893e-17,
    3.6912682997929332622e-19,
)
R0_SMALL = (
    3.645469809116044361e-2,
    -2.7832370940758248315e-1,
    2.9604999902071481676e-1,
    9.8255084081878640577e-2,
    -1.0755155280627783505e-1,
    3.1799074084414515427e-2,
    -5.161397105810714949e-3,
    5.4985253200390115387e-4,
    -4.1996983149420130705e-5,
    2.4290361107923793976e-6,
    -1.1049969793472956112e-7,
    4.066517365979110493e-9,
    -1.2374148898289852487e-10,
    3.1685725528945944421e-12,
    -6.9269560324310010835e-14,
    1.3086308625876684015e-15,
    -2.1586201986914483197e-17,
    3.1368631824799381496e-19,
)
R1X_SMALL = (
    3.8300769852423778829e-2,
    -8.1825614127328264064e-2,
    -2.4867707612196400509e-2,
    4.796745275274698292e-2,
    -1.8525884510898022173e-2,
    3.6806076878235111017e-3,
    -4.6272540602933687152e-4,
    4.0694002695808698676e-5,
    -2.6617695125295626191e-6,
    1.3506026913254338045e-7,
    -5.4835241103362765753e-9,
    1.8245086841229007743e-10,
    -5.0706666365911291344e-12,
    1.1956162517587949013e-13,
    -2.4231624427124732278e-15,
    4.2681265130729623577e-17,
    -6.5960609787230412421e-19,
    9.0181230813094543277e-21,
)
P0_MID = (
    9.9940486623603700259e-1,
    -4.8042979650469783162e-4,
    2.4513268776936584157e-6,
    -3.639471137388732469e-8,
    1.0044182738618413169e-9,
    -4.2004428387918064737e-11,
    2.3726423276052159891e-12,
    -1.684204073449712665e-13,
    1.4312922621741881835e-14,
    -1.4072486877249740359e-15,
    1.5610848392855776284e-16,
    -1.9171741252703119901e-17,
    2.5686007848521059872e-18,
    -3.7109420146916196819e-19,
)
Q0X_MID = (
    -1.2438975893520572513e-1,
    4.8881862928706867496e-4,
    -4.7052820811368968821e-6,
    1.0039419880952435536e-7,
    -3.5429405125533156029e-9,
    1.7769867118467097712e-10,
    -1.1567634142998514781e-11,
    9.2126533687781291937e-13,
    -8.618321231531530692e-14,
    9.1969324732235757176e-15,
    -1.0954406222653836395e-15,
    1.4322898315252828747e-16,
    -2.0291518627998743094e-17,
    3.0826904730126451587e-18,
    -4.979888385561043638e-19,
    8.4952119764166687129e-20,
    -1.5215489848327052388e-20,
)
P1_MID = (
    1.0009958007515082199,
    8.0544132666681481384e-4,
    -3.1811029002943048313e-6,
    4.353065301876741512e-8,
    -1.1544958408127124409e-9,
    4.7161163675932896672e-11,
    -2.6230592422234808411e-12,
    1.8416493494397381499e-13,
    -1.5523045019619097535e-14,
    1.516511188478090657e-15,
    -1.6736890645386104175e-16,
    2.0468141381408203898e-17,
    -2.7326044612235258502e-18,
    3.9359865297566837373e-19,
)
Q1X_MID = (
    3.7414212568918088205e-1,
    -6.8858858416760912146e-4,
    5.8043952586323064096e-6,
    -1.1720832906721503707e-7,
    4.0144010648247225967e-9,
    -1.976089294039190852e-10,
    1.2699758384372236585e-11,
    -1.0020146727841769817e-12,
    9.3070558389218619074e-14,
    -9.8760369476902304827e-15,
    1.170949408899681624e-15,
    -1.525200356185510527e-16,
    2.153833419387844928e-17,
    -3.263071783390441406e-18,
    5.2586213331282986002e-19,
    -8.9517554993894779151e-20,
)
HANKEL0 = (
    1.0,
    -1.25e-1,
    7.03125e-2,
    -7.32421875e-2,
    1.12152099609375e-1,
    -2.27108001708984375e-1,
    5.7250142097473144531e-1,
    -1.7277275025844573975,
    6.0740420012734830379,
    -2.4380529699556063861e+1,
    1.1001714026924673817e+2,
    -5.5133589612202058561e+2,
    3.0380905109223842686e+3,
    -1.8257755474293174691e+4,
    1.1883842625678325312e+5,
    -8.3285930401628929898e+5,
    6.2529514934347970025e+6,
    -5.0069589531988925998e+7,
    4.2593921650476690519e+8,
    -3.8362551802304335079e+9,
    3.6468400807065558535e+10,
    -3.6490108188498335653e+11,
)
HANKEL1 = (
    1.0,
    3.75e-1,
    -1.171875e-1,
    1.025390625e-1,
    -1.44195556640625e-1,
    2.77576446533203125e-1,
    -6.7659258842468261719e-1,
    1.9935317337512969971,
    -6.883914268109947443,
    2.7248827311268541962e+1,
    -1.2159789187653586851e+2,
    6.0384407670507016519e+2,
    -3.3022722944808524659e+3,
    1.9718375912236628666e+4,
    -1.2764127264617460521e+5,
    8.9029787670706787132e+5,
    -6.6563677188176871317e+6,
    5.3104110109685224543e+7,
    -4.5027860030503929977e+8,
    4.0436203251077542381e+9,
    -3.833857520742789487e+10,
    3.8270113465986059343e+11,
)
