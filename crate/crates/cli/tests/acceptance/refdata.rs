//! Reference series the acceptance checks compare against.
//!
//! External ground truth, not produced by this codebase: the saturation
//! power table, the plotted agreement-rate curves at five crossover levels,
//! and the scalar capacity baseline of the identification study.

/// (mu, saturation power) for mu = 0, 0.01, ..., 0.5 at unit noise.
pub const SATURATION_POWER: [(f64, f64); 51] = [
    (0.0, 0.0),
    (0.01, 0.118516293041571),
    (0.02, 0.216622073770917),
    (0.03, 0.309289123831429),
    (0.04, 0.399182721030622),
    (0.05, 0.487401275304271),
    (0.06, 0.574495722785659),
    (0.07, 0.66076425972601),
    (0.08, 0.746368944540166),
    (0.09, 0.831390741387116),
    (0.1, 0.915858733228839),
    (0.11, 0.999767000128063),
    (0.12, 1.08308503035076),
    (0.13, 1.16576449062496),
    (0.14, 1.24774382823797),
    (0.15, 1.32895152169362),
    (0.16, 1.40930845647063),
    (0.17, 1.48872971592012),
    (0.18, 1.56712597022471),
    (0.19, 1.64440458234272),
    (0.2, 1.72047051030039),
    (0.21, 1.79522706000599),
    (0.22, 1.8685765262986),
    (0.23, 1.94042074893613),
    (0.24, 2.01066160271362),
    (0.25, 2.079201435678),
    (0.26, 2.14594346571374),
    (0.27, 2.21079214312393),
    (0.28, 2.27365348490583),
    (0.29, 2.33443538500229),
    (0.3, 2.39304790375616),
    (0.31, 2.44940353900347),
    (0.32, 2.50341748064133),
    (0.33, 2.5550078500502),
    (0.34, 2.60409592539903),
    (0.35, 2.6506063535927),
    (0.36, 2.6944673494125),
    (0.37, 2.73561088223965),
    (0.38, 2.77397285062798),
    (0.39, 2.80949324489656),
    (0.4, 2.84211629784053),
    (0.41, 2.87179062360433),
    (0.42, 2.89846934472108),
    (0.43, 2.92211020729389),
    (0.44, 2.94267568427567),
    (0.45, 2.96013306679237),
    (0.46, 2.97445454344943),
    (0.47, 2.98561726756053),
    (0.48, 2.99360341224115),
    (0.49, 2.99840021331627),
    (0.5, 3.0),
];

/// One plotted agreement-rate curve: the crossover level and the
/// (power, rate) points strictly below the saturation onset. Rows at and
/// past the onset all equal ln 2 and are omitted; so is the zero-power row.
pub struct Curve {
    pub mu: f64,
    pub rows: &'static [(f64, f64)],
}

const RISE_01: [(f64, f64); 5] = [
    (0.4, 0.407958647946255),
    (0.443700637652136, 0.441966609659379),
    (0.487401275304271, 0.475864755536038),
    (0.815858733228839, 0.649927422083564),
    (0.865858733228839, 0.670759952678519),
];

const RISE_02: [(f64, f64); 11] = [
    (0.4, 0.247256666649016),
    (0.443700637652136, 0.268236672739345),
    (0.487401275304271, 0.29696303781175),
    (0.815858733228839, 0.437942144243534),
    (0.865858733228839, 0.456471465288518),
    (0.915858733228839, 0.47403189051192),
    (1.25, 0.579189990977824),
    (1.28947576084681, 0.584852327035016),
    (1.32895152169362, 0.594358912458048),
    (1.62047051030039, 0.667615229777654),
    (1.67047051030039, 0.679028734529132),
];

const RISE_03: [(f64, f64); 17] = [
    (0.4, 0.195341018755794),
    (0.443700637652136, 0.212406726431243),
    (0.487401275304271, 0.230141855230712),
    (0.815858733228839, 0.342391700372976),
    (0.865858733228839, 0.357245437126943),
    (0.915858733228839, 0.378676854605958),
    (1.25, 0.470015806855356),
    (1.28947576084681, 0.479645315084307),
    (1.32895152169362, 0.489210562774015),
    (1.62047051030039, 0.548489618110628),
    (1.67047051030039, 0.564728761416399),
    (1.72047051030039, 0.569806664199399),
    (2.0, 0.625301271957308),
    (2.039600717839, 0.633504786762555),
    (2.079201435678, 0.641070562874741),
    (2.29304790375616, 0.677241168801041),
    (2.34304790375616, 0.681848278479495),
];

const RISE_04: [(f64, f64); 23] = [
    (0.4, 0.173823504842132),
    (0.443700637652136, 0.189528858581889),
    (0.487401275304271, 0.204384734785901),
    (0.815858733228839, 0.307757473797662),
    (0.865858733228839, 0.3228332776671),
    (0.915858733228839, 0.337153330818748),
    (1.25, 0.419418069050709),
    (1.28947576084681, 0.428178616142801),
    (1.32895152169362, 0.437585195625498),
    (1.62047051030039, 0.496246004596775),
    (1.67047051030039, 0.508868932231755),
    (1.72047051030039, 0.517836333591851),
    (2.0, 0.567416057417553),
    (2.039600717839, 0.574186513973923),
    (2.079201435678, 0.579527755620122),
    (2.29304790375616, 0.613081331873406),
    (2.34304790375616, 0.622651104275282),
    (2.39304790375616, 0.630820967233698),
    (2.6, 0.656761480731685),
    (2.62530317679635, 0.662548749178374),
    (2.6506063535927, 0.666474896066785),
    (2.74211629784053, 0.6763648273996),
    (2.79211629784053, 0.683103875461797),
];

const RISE_05: [(f64, f64); 28] = [
    (0.4, 0.167834012069568),
    (0.443700637652136, 0.183036811910476),
    (0.487401275304271, 0.197480913148031),
    (0.815858733228839, 0.298218704759404),
    (0.865858733228839, 0.311599714508895),
    (0.915858733228839, 0.32494039609207),
    (1.25, 0.405541999001137),
    (1.28947576084681, 0.414098726621603),
    (1.32895152169362, 0.422843879154973),
    (1.62047051030039, 0.48264037369288),
    (1.67047051030039, 0.492062137652442),
    (1.72047051030039, 0.500126096541797),
    (2.0, 0.549360747930934),
    (2.039600717839, 0.55675982440353),
    (2.079201435678, 0.560791253858589),
    (2.29304790375616, 0.596234417421241),
    (2.34304790375616, 0.603616532229228),
    (2.39304790375616, 0.608270708489671),
    (2.6, 0.640529646485021),
    (2.62530317679635, 0.644242408159386),
    (2.6506063535927, 0.647897579745185),
    (2.74211629784053, 0.659268734043429),
    (2.79211629784053, 0.663131285362351),
    (2.84211629784053, 0.671214064424641),
    (2.9, 0.677076060562141),
    (2.93006653339619, 0.680897042340105),
    (2.96013306679237, 0.684678441864431),
    (2.98006653339619, 0.687137872048453),
];

pub const AGREEMENT_CURVES: [Curve; 5] = [
    Curve { mu: 0.1, rows: &RISE_01 },
    Curve { mu: 0.2, rows: &RISE_02 },
    Curve { mu: 0.3, rows: &RISE_03 },
    Curve { mu: 0.4, rows: &RISE_04 },
    Curve { mu: 0.5, rows: &RISE_05 },
];

/// (power, rate) baseline of the identification study: the real-convention
/// scalar capacity ln(1 + P) / 2 tabulated on the 301-point grid.
pub const BASELINE_ID: [(f64, f64); 301] = [
    (0.0, 0.0), (0.01, 0.00497516542658405), (0.02, 0.00990131364808986),
    (0.03, 0.0147794011207722), (0.04, 0.0196103565766407), (0.05, 0.024395082084716),
    (0.06, 0.0291344540619879), (0.07, 0.0338293242369074), (0.08, 0.0384805205680642),
    (0.09, 0.0430888481205262), (0.1, 0.0476550899021625), (0.11, 0.0521800076621214),
    (0.12, 0.0566643426535016), (0.13, 0.0611088163621246), (0.14, 0.0655141312032021),
    (0.15, 0.0698809711875793), (0.16, 0.0742100025591366), (0.17, 0.0785018744048323),
    (0.18, 0.0827572192387867), (0.19, 0.086976653561719), (0.2, 0.0911607783969773),
    (0.21, 0.0953101798043249), (0.22, 0.0994254293725826), (0.23, 0.103507084692163),
    (0.24, 0.107555689808473), (0.25, 0.111571775657105), (0.26, 0.115555860481693),
    (0.27, 0.11950845023525), (0.28, 0.123430038965763), (0.29, 0.12732110918679),
    (0.3, 0.131182132233746), (0.31, 0.13501356860653), (0.32, 0.13881586829914),
    (0.33, 0.142589471116831), (0.34, 0.14633480698141), (0.35, 0.150052296225169),
    (0.36, 0.15374234987398), (0.37, 0.157405369920017), (0.38, 0.161041749584557),
    (0.39, 0.1646518735713), (0.4, 0.168236118310606), (0.41, 0.171794852195039),
    (0.42, 0.175328435806585), (0.43, 0.178837222135908), (0.44, 0.182321556793955),
    (0.45, 0.185781778216242), (0.46, 0.189218217860123), (0.47, 0.192631200395322),
    (0.48, 0.196021043888012), (0.49, 0.199388059978684), (0.5, 0.202732554054082),
    (0.51, 0.206054825413416), (0.52, 0.209355167429093), (0.53, 0.212633867702172),
    (0.54, 0.215891208212769), (0.55, 0.219127465465578), (0.56, 0.222342910630723),
    (0.57, 0.225537809680108), (0.58, 0.228712423519438), (0.59, 0.23186700811607),
    (0.6, 0.235001814622868), (0.61, 0.238117089498186), (0.62, 0.241213074622146),
    (0.63, 0.244290007409335), (0.64, 0.247348120918054), (0.65, 0.250387643956245),
    (0.66, 0.253408801184226), (0.67, 0.256411813214332), (0.68, 0.259396896707584),
    (0.69, 0.262364264467491), (0.7, 0.265314125531085), (0.71, 0.268246685257284),
    (0.72, 0.271162145412681), (0.73, 0.274060704254844), (0.74, 0.276942556613219),
    (0.75, 0.279807893967711), (0.76, 0.28265690452503), (0.77, 0.285489773292869),
    (0.78, 0.288306682151997), (0.79, 0.291107809926332), (0.8, 0.29389333245106),
    (0.81, 0.296663422638867), (0.82, 0.299418250544352), (0.83, 0.302157983426665),
    (0.84, 0.304882785810447), (0.85, 0.307592819545117), (0.86, 0.310288243862555),
    (0.87, 0.312969215433248), (0.88, 0.315635888420929), (0.89, 0.318288414535776),
    (0.9, 0.320926943086197), (0.91, 0.323551621029269), (0.92, 0.326162593019845),
    (0.93, 0.328760001458397), (0.94, 0.331343986537618), (0.95, 0.333914686287828),
    (0.96, 0.336472236621213), (0.97, 0.339016771374949), (0.98, 0.341548422353222),
    (0.99, 0.344067319368201), (1.0, 0.346573590279973), (1.01, 0.349067361035492),
    (1.02, 0.351548755706557), (1.03, 0.354017896526848), (1.04, 0.356474903928063),
    (1.05, 0.358919896575158), (1.06, 0.361352991400745), (1.07, 0.363774303638639),
    (1.08, 0.366183946856613), (1.09, 0.36858203298836), (1.1, 0.370968672364689),
    (1.11, 0.373343973743988), (1.12, 0.375708044341961), (1.13, 0.378060989860667),
    (1.14, 0.38040291451688), (1.15, 0.382733921069786), (1.16, 0.385054110848037),
    (1.17, 0.387363583776184), (1.18, 0.389662438400499), (1.19, 0.391950771914205),
    (1.2, 0.394228680182135), (1.21, 0.396496257764831), (1.22, 0.398753597942094),
    (1.23, 0.401000792736014), (1.24, 0.403237932933474), (1.25, 0.405465108108164),
    (1.26, 0.407682406642097), (1.27, 0.409889915746656), (1.28, 0.412087721483175),
    (1.29, 0.414275908783074), (1.3, 0.416454561467552), (1.31, 0.418623762266851),
    (1.32, 0.420783592839109), (1.33, 0.422934133788805), (1.34, 0.425075464684805),
    (1.35, 0.427207664078034), (1.36, 0.429330809518759), (1.37, 0.43144497757352),
    (1.38, 0.433550243841692), (1.39, 0.43564668297171), (1.4, 0.43773436867695),
    (1.41, 0.439813373751282), (1.42, 0.441883770084297), (1.43, 0.443945628676228),
    (1.44, 0.445999019652555), (1.45, 0.448044012278318), (1.46, 0.450080674972136),
    (1.47, 0.452109075319943), (1.48, 0.454129280088445), (1.49, 0.456141355238308),
    (1.5, 0.458145365937078), (1.51, 0.460141376571846), (1.52, 0.462129450761666),
    (1.53, 0.464109651369714), (1.54, 0.466082040515223), (1.55, 0.468046679585167),
    (1.56, 0.470003629245736), (1.57, 0.471952949453564), (1.58, 0.473894699466763),
    (1.59, 0.475828937855723), (1.6, 0.477755722513718), (1.61, 0.479675110667301),
    (1.62, 0.481587158886503), (1.63, 0.483491923094837), (1.64, 0.485389458579112),
    (1.65, 0.487279819999065), (1.66, 0.489163061396804), (1.67, 0.491039236206079),
    (1.68, 0.492908397261383), (1.69, 0.494770596806874), (1.7, 0.496625886505142),
    (1.71, 0.498474317445805), (1.72, 0.500315940153953), (1.73, 0.502150804598434),
    (1.74, 0.503978960199989), (1.75, 0.50580045583924), (1.76, 0.507615339864529),
    (1.77, 0.509423660099624), (1.78, 0.511225463851273), (1.79, 0.513020797916637),
    (1.8, 0.514809708590579), (1.81, 0.516592241672827), (1.82, 0.518368442475011),
    (1.83, 0.520138355827573), (1.84, 0.521902026086557), (1.85, 0.523659497140279),
    (1.86, 0.525410812415881), (1.87, 0.527156014885765), (1.88, 0.528895147073927),
    (1.89, 0.53062825106217), (1.9, 0.532355368496214), (1.91, 0.534076540591701),
    (1.92, 0.535791808140095), (1.93, 0.537501211514488), (1.94, 0.539204790675295),
    (1.95, 0.540902585175864), (1.96, 0.542594634167984), (1.97, 0.544280976407304),
    (1.98, 0.545961650258657), (1.99, 0.547636693701298), (2.0, 0.549306144334055),
    (2.01, 0.550970039380392), (2.02, 0.552628415693389), (2.03, 0.554281309760639),
    (2.04, 0.555928757709065), (2.05, 0.55757079530966), (2.06, 0.559207457982145),
    (2.07, 0.560838780799553), (2.08, 0.562464798492742), (2.09, 0.564085545454827),
    (2.1, 0.56570105574555), (2.11, 0.567311363095571), (2.12, 0.568916500910696),
    (2.13, 0.570516502276031), (2.14, 0.572111399960081), (2.15, 0.573701226418771),
    (2.16, 0.57528601379941), (2.17, 0.576865793944595), (2.18, 0.578440598396043),
    (2.19, 0.580010458398377), (2.2, 0.58157540490284), (2.21, 0.583135468570962),
    (2.22, 0.584690679778158), (2.23, 0.586241068617283), (2.24, 0.587786664902119),
    (2.25, 0.589327498170823), (2.26, 0.590863597689308), (2.27, 0.592394992454581),
    (2.28, 0.593921711198026), (2.29, 0.59544378238864), (2.3, 0.596961234236217),
    (2.31, 0.598474094694486), (2.32, 0.599982391464199), (2.33, 0.601486151996176),
    (2.34, 0.602985403494305), (2.35, 0.604480172918488), (2.36, 0.605970486987556),
    (2.37, 0.607456372182135), (2.38, 0.608937854747464), (2.39, 0.61041496069618),
    (2.4, 0.611887715811058), (2.41, 0.613356145647713), (2.42, 0.614820275537257),
    (2.43, 0.616280130588924), (2.44, 0.617735735692653), (2.45, 0.619187115521634),
    (2.46, 0.620634294534816), (2.47, 0.622077296979384), (2.48, 0.623516146893191),
    (2.49, 0.624950868107168), (2.5, 0.626381484247684), (2.51, 0.627808018738887),
    (2.52, 0.629230494805003), (2.53, 0.630648935472603), (2.54, 0.632063363572842),
    (2.55, 0.633473801743662), (2.56, 0.63488027243197), (2.57, 0.636282797895774),
    (2.58, 0.637681400206304), (2.59, 0.639076101250094), (2.6, 0.640466922731032),
    (2.61, 0.641853886172395), (2.62, 0.64323701291884), (2.63, 0.64461632413838),
    (2.64, 0.645991840824325), (2.65, 0.6473635837972), (2.66, 0.648731573706637),
    (2.67, 0.650095831033239), (2.68, 0.65145637609042), (2.69, 0.652813229026218),
    (2.7, 0.654166409825089), (2.71, 0.655515938309672), (2.72, 0.656861834142528),
    (2.73, 0.658204116827862), (2.74, 0.65954280571322), (2.75, 0.66087791999116),
    (2.76, 0.662209478700902), (2.77, 0.66353750072996), (2.78, 0.664862004815748),
    (2.79, 0.666183009547167), (2.8, 0.66750053336617), (2.81, 0.668814594569305),
    (2.82, 0.670125211309242), (2.83, 0.671432401596277), (2.84, 0.672736183299818),
    (2.85, 0.674036574149846), (2.86, 0.67533359173837), (2.87, 0.676627253520845),
    (2.88, 0.677917576817591), (2.89, 0.679204578815177), (2.9, 0.6804882765678),
    (2.91, 0.681768686998637), (2.92, 0.683045826901186), (2.93, 0.684319712940585),
    (2.94, 0.685590361654921), (2.95, 0.686857789456515), (2.96, 0.688122012633195),
    (2.97, 0.68938304734955), (2.98, 0.690640909648173), (2.99, 0.691895615450886),
    (3.0, 0.693147180559945),
];
