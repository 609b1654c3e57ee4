"""Critical values of the studentized range distribution for k = 3 groups.

QUANTILES[df][j] is the value q such that P(Q > q) = UPPER_TAIL_P[j] for the
range of 3 group means over an error estimate with df degrees of freedom.
The "inf" row is the limiting normal-theory case. Machine generated; do not
edit by hand.
"""

UPPER_TAIL_P = (
    0.9999, 0.999, 0.99, 0.975, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.04, 0.03, 0.025, 0.02, 0.015, 0.01, 0.0075, 0.005, 0.0025, 0.001, 0.0005, 0.0001,
)

QUANTILES = {
    1: (0.019048, 0.060275, 0.191916, 0.306976, 0.442787, 0.652625, 1.011109, 1.375952, 1.798907, 2.337542, 3.093020, 4.293219, 5.229507, 6.615252, 8.900776, 13.436699, 17.955348, 26.975530, 33.734700, 44.995448, 54.002007, 67.510147, 90.021449, 135.040660, 180.058172, 270.091501, 540.188093, 1350.473795, 2700.948609, 7654.896853),
    2: (0.019047, 0.060260, 0.191429, 0.305013, 0.437035, 0.635117, 0.953035, 1.248281, 1.557454, 1.908179, 2.337874, 2.916879, 3.308014, 3.820436, 4.548022, 5.732649, 6.711380, 8.330783, 9.363313, 10.868362, 11.936544, 13.379867, 15.489367, 19.018936, 21.989075, 26.965134, 38.182663, 60.417777, 85.465165, 191.144416),
    3: (0.019047, 0.060255, 0.191268, 0.304364, 0.435144, 0.629448, 0.934843, 1.209786, 1.487848, 1.790912, 2.145056, 2.595196, 2.883773, 3.245423, 3.731509, 4.467364, 5.034225, 5.909598, 6.435155, 7.164819, 7.660535, 8.305626, 9.205254, 10.618540, 11.737150, 13.499445, 17.103535, 23.313241, 29.428142, 50.427138),
    4: (0.019047, 0.060252, 0.191187, 0.304039, 0.434204, 0.626644, 0.925955, 1.191240, 1.454858, 1.736411, 2.057585, 2.453798, 2.701018, 3.003795, 3.399285, 3.975596, 4.403376, 5.040241, 5.410471, 5.911294, 6.243653, 6.667547, 7.244058, 8.119792, 8.790574, 9.813410, 11.800716, 14.982810, 17.903488, 26.942310),
    5: (0.019047, 0.060251, 0.191139, 0.303845, 0.433641, 0.624971, 0.920687, 1.180330, 1.435617, 1.704951, 2.007732, 2.374536, 2.599651, 2.871505, 3.220436, 3.717111, 4.077394, 4.601726, 4.900452, 5.298035, 5.558023, 5.885453, 6.323805, 6.975737, 7.464857, 8.195503, 9.570075, 11.671983, 13.517632, 18.874085),
    6: (0.019047, 0.060250, 0.191106, 0.303716, 0.433267, 0.623860, 0.917202, 1.173145, 1.423015, 1.684477, 1.975544, 2.323882, 2.535293, 2.788188, 3.108965, 3.558372, 3.879302, 4.339195, 4.597617, 4.937752, 5.157934, 5.432837, 5.796898, 6.330508, 6.725162, 7.306371, 8.375706, 9.959519, 11.308067, 15.052578),
    7: (0.019047, 0.060249, 0.191083, 0.303624, 0.433000, 0.623069, 0.914725, 1.168056, 1.414122, 1.670091, 1.953050, 2.288730, 2.490830, 2.730943, 3.032919, 3.451165, 3.746476, 4.164941, 4.397736, 4.701669, 4.896970, 5.139271, 5.457623, 5.919294, 6.257174, 6.749608, 7.640907, 8.930393, 10.003631, 12.888409),
    8: (0.019047, 0.060249, 0.191066, 0.303554, 0.432799, 0.622476, 0.912875, 1.164263, 1.407510, 1.659431, 1.936446, 2.262915, 2.458283, 2.689205, 2.977758, 3.373969, 3.651330, 4.041036, 4.256185, 4.535358, 4.713745, 4.933996, 5.221637, 5.635393, 5.935783, 6.370100, 7.146421, 8.249500, 9.151636, 11.516705),
    9: (0.019047, 0.060248, 0.191052, 0.303501, 0.432644, 0.622016, 0.911440, 1.161326, 1.402402, 1.651215, 1.923687, 2.243154, 2.433431, 2.657432, 2.935932, 3.315758, 3.579866, 3.948492, 4.150787, 4.412018, 4.578204, 4.782614, 5.048303, 5.428043, 5.701995, 6.095598, 6.792215, 7.768013, 8.555013, 10.577761),
    10: (0.019047, 0.060248, 0.191042, 0.303458, 0.432519, 0.621648, 0.910295, 1.158985, 1.398337, 1.644689, 1.913576, 2.227543, 2.413835, 2.632439, 2.903132, 3.270308, 3.524243, 3.876777, 4.069310, 4.316968, 4.473959, 4.666470, 4.915735, 5.270162, 5.524544, 5.888172, 6.526596, 7.410581, 8.115492, 9.898298),
    11: (0.019047, 0.060247, 0.191033, 0.303422, 0.432418, 0.621347, 0.909360, 1.157076, 1.395026, 1.639380, 1.905367, 2.214899, 2.397989, 2.612267, 2.876725, 3.233845, 3.479729, 3.819588, 4.004463, 4.241510, 4.391335, 4.574596, 4.811134, 5.146034, 5.385385, 5.726089, 6.320315, 7.135252, 7.779018, 9.385566),
    12: (0.019047, 0.060247, 0.191026, 0.303393, 0.432333, 0.621097, 0.908581, 1.155489, 1.392276, 1.634978, 1.898570, 2.204451, 2.384911, 2.595645, 2.855009, 3.203947, 3.443305, 3.772929, 3.951641, 4.180172, 4.324260, 4.500132, 4.726533, 5.045935, 5.273400, 5.596042, 6.155643, 6.916931, 7.513564, 8.985822),
    13: (0.019047, 0.060247, 0.191019, 0.303368, 0.432261, 0.620885, 0.907924, 1.154148, 1.389956, 1.631267, 1.892849, 2.195671, 2.373934, 2.581711, 2.836837, 3.178989, 3.412952, 3.734142, 3.907790, 4.129341, 4.268736, 4.438575, 4.656717, 4.963534, 5.181377, 5.489441, 6.021231, 6.739728, 7.299024, 8.665935),
    14: (0.019047, 0.060247, 0.191014, 0.303347, 0.432200, 0.620703, 0.907361, 1.153001, 1.387972, 1.628098, 1.887967, 2.188191, 2.364590, 2.569864, 2.821408, 3.157841, 3.387271, 3.701394, 3.870809, 4.086536, 4.222023, 4.386846, 4.598136, 4.894539, 5.104439, 5.400503, 5.909494, 6.593120, 7.122167, 8.404450),
    15: (0.019047, 0.060247, 0.191009, 0.303328, 0.432147, 0.620546, 0.906873, 1.152009, 1.386257, 1.625359, 1.883752, 2.181741, 2.356539, 2.559666, 2.808145, 3.139694, 3.365262, 3.673378, 3.839203, 4.050000, 4.182183, 4.342772, 4.548288, 4.835934, 5.039172, 5.325193, 5.815171, 6.469871, 6.973951, 8.186894),
    16: (0.019047, 0.060247, 0.191005, 0.303312, 0.432100, 0.620409, 0.906447, 1.151142, 1.384758, 1.622969, 1.880077, 2.176122, 2.349531, 2.550797, 2.796622, 3.123953, 3.346191, 3.649139, 3.811882, 4.018451, 4.147807, 4.304775, 4.505361, 4.785545, 4.983117, 5.260614, 5.734509, 6.364847, 6.847993, 8.003171),
    17: (0.019047, 0.060247, 0.191002, 0.303298, 0.432059, 0.620287, 0.906071, 1.150377, 1.383439, 1.620864, 1.876844, 2.171184, 2.343375, 2.543012, 2.786517, 3.110168, 3.329506, 3.627963, 3.788030, 3.990937, 4.117845, 4.271682, 4.468010, 4.741763, 4.934460, 5.204635, 5.664752, 6.274307, 6.739666, 7.846036),
    18: (0.019047, 0.060246, 0.190999, 0.303285, 0.432022, 0.620180, 0.905737, 1.149699, 1.382267, 1.618997, 1.873978, 2.166810, 2.337926, 2.536125, 2.777584, 3.097996, 3.314788, 3.609304, 3.767028, 3.966730, 4.091498, 4.242602, 4.435217, 4.703370, 4.891830, 5.155651, 5.603839, 6.195466, 6.645532, 7.710157),
    19: (0.019047, 0.060246, 0.190996, 0.303274, 0.431990, 0.620083, 0.905439, 1.149092, 1.381220, 1.617330, 1.871419, 2.162909, 2.333067, 2.529988, 2.769631, 3.087171, 3.301706, 3.592739, 3.748395, 3.945269, 4.068152, 4.216849, 4.406198, 4.669433, 4.854176, 5.112431, 5.550196, 6.126204, 6.562992, 7.591530),
    20: (0.019047, 0.060246, 0.190993, 0.303264, 0.431960, 0.619997, 0.905170, 1.148546, 1.380279, 1.615831, 1.869121, 2.159407, 2.328708, 2.524485, 2.762505, 3.077480, 3.290004, 3.577935, 3.731750, 3.926112, 4.047322, 4.193884, 4.380339, 4.639220, 4.820676, 5.074018, 5.502597, 6.064884, 6.490038, 7.487091),
    21: (0.019047, 0.060246, 0.190991, 0.303255, 0.431934, 0.619918, 0.904927, 1.148053, 1.379429, 1.614478, 1.867046, 2.156246, 2.324775, 2.519523, 2.756083, 3.068755, 3.279474, 3.564625, 3.716793, 3.908908, 4.028622, 4.173278, 4.357149, 4.612151, 4.790682, 5.039654, 5.460081, 6.010220, 6.425102, 7.394455),
    22: (0.019047, 0.060246, 0.190989, 0.303246, 0.431910, 0.619847, 0.904706, 1.147605, 1.378656, 1.613249, 1.865163, 2.153380, 2.321210, 2.515025, 2.750265, 3.060857, 3.269949, 3.552594, 3.703279, 3.893373, 4.011742, 4.154685, 4.336238, 4.587760, 4.763670, 5.008732, 5.421876, 5.961189, 6.366936, 7.311743),
    23: (0.019047, 0.060246, 0.190987, 0.303239, 0.431887, 0.619782, 0.904505, 1.147196, 1.377952, 1.612128, 1.863446, 2.150768, 2.317962, 2.510931, 2.744971, 3.053675, 3.261291, 3.541667, 3.691009, 3.879276, 3.996429, 4.137824, 4.317285, 4.565669, 4.739219, 4.980762, 5.387360, 5.916964, 6.314539, 7.237449),
    24: (0.019047, 0.060246, 0.190985, 0.303232, 0.431867, 0.619722, 0.904320, 1.146821, 1.377306, 1.611102, 1.861875, 2.148378, 2.314991, 2.507187, 2.740133, 3.047115, 3.253386, 3.531697, 3.679819, 3.866425, 3.982475, 4.122466, 4.300028, 4.545569, 4.716981, 4.955340, 5.356024, 5.876876, 6.267096, 7.170359),
    25: (0.019047, 0.060246, 0.190984, 0.303225, 0.431849, 0.619667, 0.904151, 1.146477, 1.376713, 1.610158, 1.860431, 2.146184, 2.312264, 2.503750, 2.735694, 3.041100, 3.246142, 3.522566, 3.669573, 3.854663, 3.969707, 4.108417, 4.284250, 4.527202, 4.696669, 4.932134, 5.327451, 5.840371, 6.223940, 7.109479),
    26: (0.019047, 0.060246, 0.190982, 0.303219, 0.431831, 0.619617, 0.903994, 1.146159, 1.376166, 1.609289, 1.859100, 2.144161, 2.309751, 2.500585, 2.731607, 3.035566, 3.239478, 3.514171, 3.660156, 3.843857, 3.957979, 4.095517, 4.269768, 4.510353, 4.678044, 4.910867, 5.301290, 5.806992, 6.184516, 7.053989),
    27: (0.019047, 0.060246, 0.190981, 0.303214, 0.431816, 0.619570, 0.903849, 1.145865, 1.375659, 1.608484, 1.857869, 2.142291, 2.307428, 2.497660, 2.727831, 3.030455, 3.233328, 3.506426, 3.651472, 3.833895, 3.947170, 4.083631, 4.256429, 4.494842, 4.660905, 4.891307, 5.277249, 5.776353, 6.148361, 7.003206),
    28: (0.019047, 0.060246, 0.190980, 0.303209, 0.431801, 0.619526, 0.903714, 1.145592, 1.375189, 1.607737, 1.856727, 2.140557, 2.305274, 2.494948, 2.724333, 3.025723, 3.227633, 3.499260, 3.643438, 3.824683, 3.937176, 4.072644, 4.244103, 4.480516, 4.645079, 4.873256, 5.255081, 5.748133, 6.115088, 6.956560),
    29: (0.019047, 0.060246, 0.190978, 0.303204, 0.431787, 0.619486, 0.903589, 1.145337, 1.374752, 1.607042, 1.855665, 2.138945, 2.303272, 2.492429, 2.721082, 3.021327, 3.222347, 3.492609, 3.635983, 3.816137, 3.927907, 4.062457, 4.232678, 4.467245, 4.630424, 4.856545, 5.234576, 5.722055, 6.084365, 6.913566),
    30: (0.019047, 0.060246, 0.190977, 0.303199, 0.431774, 0.619448, 0.903472, 1.145100, 1.374344, 1.606394, 1.854674, 2.137441, 2.301406, 2.490080, 2.718054, 3.017234, 3.217425, 3.486420, 3.629048, 3.808190, 3.919289, 4.052988, 4.222061, 4.454915, 4.616812, 4.841032, 5.215554, 5.697886, 6.055911, 6.873813),
    40: (0.019047, 0.060245, 0.190969, 0.303167, 0.431681, 0.619174, 0.902625, 1.143384, 1.371392, 1.601710, 1.847518, 2.126595, 2.287950, 2.473164, 2.696264, 2.987828, 3.182108, 3.442082, 3.579409, 3.751370, 3.857719, 3.985394, 4.146365, 4.367157, 4.520044, 4.730927, 5.080922, 5.527466, 5.855840, 6.596123),
    60: (0.019047, 0.060245, 0.190961, 0.303135, 0.431588, 0.618900, 0.901779, 1.141671, 1.368450, 1.597047, 1.840408, 2.115838, 2.274622, 2.456435, 2.674759, 2.958889, 3.147422, 3.398661, 3.530874, 3.695928, 3.797720, 3.919631, 4.072869, 4.282198, 4.426554, 4.624862, 4.951874, 5.365187, 5.666277, 6.336046),
    120: (0.019047, 0.060245, 0.190953, 0.303103, 0.431495, 0.618626, 0.900935, 1.139963, 1.365518, 1.592406, 1.833342, 2.105170, 2.261421, 2.439890, 2.653534, 2.930409, 3.113356, 3.356138, 3.483418, 3.641829, 3.739250, 3.855645, 4.001507, 4.199944, 4.336227, 4.522681, 4.828168, 5.210645, 5.486644, 6.092420),
    "inf": (0.019047, 0.060245, 0.190945, 0.303071, 0.431402, 0.618352, 0.900092, 1.138259, 1.362597, 1.587788, 1.826320, 2.094590, 2.248346, 2.423529, 2.632586, 2.902380, 3.079897, 3.314493, 3.437014, 3.589038, 3.682268, 3.793386, 3.932213, 4.120303, 4.248950, 4.424235, 4.709573, 5.063453, 5.316400, 5.864157),
}
