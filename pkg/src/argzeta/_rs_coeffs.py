"""Taylor coefficients of the Riemann-Siegel corrections C0..C4 in (p - 1/2).

Generated by tools/gen_rs_coeffs.py; do not edit by hand.
"""

RS_COEFFS = (
    (
        3.8268343236508977e-1,
        0.0,
        1.7489618723100818,
        0.0,
        2.1180252076854964,
        0.0,
        -8.7072166705114807e-1,
        0.0,
        -3.4733112243465167,
        0.0,
        -1.6626947308999324,
        0.0,
        1.2167312889192321,
        0.0,
        1.3014304161007976,
        0.0,
        3.0511021827361672e-2,
        0.0,
        -3.7558030515450952e-1,
        0.0,
        -1.085784416564066e-1,
        0.0,
        5.1832902999549623e-2,
        0.0,
        2.9999480619902276e-2,
        0.0,
        -2.2759396706125642e-3,
        0.0,
        -4.3826474165803383e-3,
        0.0,
        -4.064230183729847e-4,
        0.0,
        4.0060977854221139e-4,
        0.0,
        8.9710579913888413e-5,
        0.0,
        -2.3025650027239107e-5,
        0.0,
        -9.3800066019067925e-6,
        0.0,
        6.3235149476091075e-7,
        0.0,
        6.5510228192315017e-7,
    ),
    (
        0.0,
        -5.3650205256750694e-2,
        0.0,
        1.1027818741081482e-1,
        0.0,
        1.2317200154315226,
        0.0,
        1.2634964862799458,
        0.0,
        -1.695108997559503,
        0.0,
        -2.9998711967650101,
        0.0,
        -1.0819944959899209e-1,
        0.0,
        1.9407662946212713,
        0.0,
        7.8384235615006865e-1,
        0.0,
        -5.0548296679003659e-1,
        0.0,
        -3.8450723496057974e-1,
        0.0,
        3.7472646465315321e-2,
        0.0,
        9.0920266109731763e-2,
        0.0,
        1.0449237550064509e-2,
        0.0,
        -1.2582979651583416e-2,
        0.0,
        -3.3995037211512741e-3,
        0.0,
        1.0410950537714891e-3,
        0.0,
        5.0109490511184869e-4,
        0.0,
        -3.9563596690031816e-5,
        0.0,
        -4.7624592453571896e-5,
        0.0,
        -1.8539355338085132e-6,
        0.0,
        3.1936918080068972e-6,
        0.0,
        4.0907807608506066e-7,
    ),
    (
        5.1885428302931685e-3,
        0.0,
        1.2378633552253898e-3,
        0.0,
        -1.8137505725166997e-1,
        0.0,
        1.4291492748532127e-1,
        0.0,
        1.3303391766687565,
        0.0,
        3.5224723534037337e-1,
        0.0,
        -2.4210015958919507,
        0.0,
        -1.6760787022538109,
        0.0,
        1.3689416723328372,
        0.0,
        1.5539019430222983,
        0.0,
        -1.7221642734729981e-1,
        0.0,
        -6.359068055045431e-1,
        0.0,
        -9.9116498730412081e-2,
        0.0,
        1.4033480067387009e-1,
        0.0,
        4.7823520198272922e-2,
        0.0,
        -1.7356040641479781e-2,
        0.0,
        -1.0225012534028592e-2,
        0.0,
        9.2741491597948879e-4,
        0.0,
        1.3572194372373385e-3,
        0.0,
        6.4136901202938801e-5,
        0.0,
        -1.230080569819663e-4,
        0.0,
        -1.8313507404789203e-5,
        0.0,
        7.8216286043226273e-6,
        0.0,
        2.0087542484759946e-6,
    ),
    (
        0.0,
        -2.6794321814389138e-3,
        0.0,
        2.995372109103515e-2,
        0.0,
        -4.2570172541828698e-2,
        0.0,
        -2.8997965779803888e-1,
        0.0,
        4.888831999235446e-1,
        0.0,
        1.2308558763957461,
        0.0,
        -8.2975607085274087e-1,
        0.0,
        -2.2497635366665669,
        0.0,
        7.8451399610054714e-2,
        0.0,
        1.7467492800868894,
        0.0,
        4.5968080979749935e-1,
        0.0,
        -6.6193534710397749e-1,
        0.0,
        -3.1590441036173635e-1,
        0.0,
        1.2844792545207496e-1,
        0.0,
        1.0073382716626152e-1,
        0.0,
        -9.5301838488252678e-3,
        0.0,
        -1.9264421687514089e-2,
        0.0,
        -1.2464637158769292e-3,
        0.0,
        2.4243969641103086e-3,
        0.0,
        4.3764769774185702e-4,
        0.0,
        -2.0714032687001791e-4,
        0.0,
        -6.2743445041865156e-5,
        0.0,
        1.1575343814595669e-5,
        0.0,
        5.8838549245403798e-6,
    ),
    (
        4.6483389361763382e-4,
        0.0,
        -4.0226429461361883e-3,
        0.0,
        3.8471770517961269e-3,
        0.0,
        6.581175135809486e-2,
        0.0,
        -1.9604124343694449e-1,
        0.0,
        -2.0854053686358853e-1,
        0.0,
        9.5077541851417509e-1,
        0.0,
        5.341535312914874e-1,
        0.0,
        -1.6763494411763401,
        0.0,
        -1.076747157875129,
        0.0,
        1.235339301656597,
        0.0,
        1.0257825340057276,
        0.0,
        -4.0124095793988544e-1,
        0.0,
        -5.0366639951083034e-1,
        0.0,
        3.573487795502745e-2,
        0.0,
        1.4431763086785417e-1,
        0.0,
        1.5091527417903469e-2,
        0.0,
        -2.6098874779194361e-2,
        0.0,
        -6.1266283795192617e-3,
        0.0,
        3.0775031298708412e-3,
        0.0,
        1.1562478934088752e-3,
        0.0,
        -2.2775966758472127e-4,
        0.0,
        -1.4189637118181444e-4,
        0.0,
        7.4648603079559195e-6,
        0.0,
        1.2479701645409117e-5,
    ),
)
