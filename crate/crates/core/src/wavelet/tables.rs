// @generated by scripts/gen_filters.py; do not edit by hand.
#![allow(clippy::excessive_precision, clippy::unreadable_literal)]
pub(crate) static DAUBECHIES: [&[f64]; 20] = [
    // db1
    &[0.7071067811865476, 0.7071067811865476],
    // db2
    &[0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037],
    // db3
    &[0.33267055295008263, 0.8068915093110925, 0.45987750211849154, -0.13501102001025458, -0.08544127388202666, 0.03522629188570953],
    // db4
    &[0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859854, -0.18703481171909309, 0.030841381835560764, 0.0328830116668852, -0.010597401785069032],
    // db5
    &[0.16010239797419293, 0.6038292697971896, 0.7243085284377729, 0.13842814590132074, -0.24229488706638203, -0.032244869584638375, 0.07757149384004572, -0.006241490212798274, -0.012580751999081999, 0.0033357252854737712],
    // db6
    &[0.11154074335010947, 0.49462389039845306, 0.7511339080210954, 0.31525035170919763, -0.22626469396543983, -0.12976686756726194, 0.09750160558732304, 0.027522865530305727, -0.03158203931748603, 0.0005538422011614961, 0.004777257510945511, -0.0010773010853084796],
    // db7
    &[0.07785205408500918, 0.3965393194819173, 0.7291320908462351, 0.4697822874051931, -0.14390600392856498, -0.22403618499387498, 0.07130921926683026, 0.08061260915108308, -0.03802993693501441, -0.01657454163066688, 0.01255099855609984, 0.0004295779729213665, -0.0018016407040474908, 0.00035371379997452024],
    // db8
    &[0.05441584224310401, 0.31287159091429995, 0.6756307362972898, 0.5853546836542067, -0.015829105256349306, -0.2840155429615469, 0.0004724845739132828, 0.12874742662047847, -0.017369301001807547, -0.044088253930794755, 0.013981027917398282, 0.008746094047405777, -0.004870352993451574, -0.00039174037337694705, 0.0006754494064505693, -0.00011747678412476953],
    // db9
    &[0.038077947363878345, 0.24383467461259034, 0.6048231236901112, 0.6572880780513005, 0.13319738582500756, -0.2932737832791749, -0.09684078322297646, 0.14854074933810638, 0.03072568147933338, -0.06763282906132997, 0.00025094711483145197, 0.022361662123679096, -0.004723204757751397, -0.00428150368246343, 0.0018476468830562265, 0.00023038576352319597, -0.0002519631889427101, 3.93473203162716e-05],
    // db10
    &[0.026670057900555554, 0.1881768000776915, 0.5272011889317256, 0.6884590394536035, 0.2811723436605775, -0.24984642432731538, -0.19594627437737705, 0.12736934033579325, 0.09305736460357235, -0.07139414716639708, -0.029457536821875813, 0.033212674059341, 0.0036065535669561697, -0.010733175483330575, 0.001395351747052901, 0.001992405295185056, -0.0006858566949597116, -0.00011646685512928545, 9.358867032006959e-05, -1.3264202894521244e-05],
    // db11
    &[0.018694297761471083, 0.1440670211506245, 0.44989976435604534, 0.6856867749162006, 0.41196436894790744, -0.16227524502749036, -0.27423084681794696, 0.0660435881966832, 0.14981201246637849, -0.046479955116684187, -0.0664387856950252, 0.031335090219046076, 0.020840904360181062, -0.0153648209062016, -0.0033408588730144454, 0.004928417656059041, -0.0003085928588151432, -0.0008930232506662646, 0.0002491525235528235, 5.4439074699368475e-05, -3.4634984186984996e-05, 4.49427427723651e-06],
    // db12
    &[0.013112257957229518, 0.10956627282118515, 0.37735513521421266, 0.6571987225793071, 0.5158864784278157, -0.04476388565377463, -0.3161784537527855, -0.023779257256069726, 0.18247860592757967, 0.00535956967435215, -0.09643212009650708, 0.010849130255822185, 0.04154627749508444, -0.01221864906974828, -0.012840825198300683, 0.00671149900879551, 0.0022486072409952378, -0.0021795036186277603, 6.545128212509596e-06, 0.00038865306282093143, -8.850410920820432e-05, -2.4241545757030785e-05, 1.2776952219379767e-05, -1.529071758068511e-06],
    // db13
    &[0.009202133538962367, 0.08286124387290278, 0.31199632216043804, 0.6110558511587877, 0.5888895704312189, 0.08698572617964724, -0.31497290771138864, -0.12457673075081525, 0.17947607942933985, 0.07294893365677717, -0.10580761818793433, -0.026488406475343694, 0.05613947710028343, 0.0023799722540590786, -0.02383142071032365, 0.003923941448797416, 0.007255589401617566, -0.0027619112346568622, -0.001315673911892299, 0.0009323261308672633, 4.9251525126289464e-05, -0.0001651289885565055, 3.0678537579325496e-05, 1.0441930571408138e-05, -4.700416479360868e-06, 5.220035098454864e-07],
    // db14
    &[0.006461153460087948, 0.0623647588493989, 0.2548502677926214, 0.5543056179408938, 0.6311878491048568, 0.21867068775890652, -0.27168855227874805, -0.21803352999327605, 0.1383952138648066, 0.1399890165844607, -0.08674841156816969, -0.07154895550404614, 0.05523712625921604, 0.026981408307912916, -0.030185351540390634, -0.005615049530356959, 0.01278949326633341, -0.000746218989268385, -0.0038496388680221874, 0.001061691085606762, 0.0007080211542355279, -0.0003868319473129545, -4.1777245770372596e-05, 6.87550425269751e-05, -1.0337209184570774e-05, -4.389704901781394e-06, 1.7249946753678127e-06, -1.7871399683113592e-07],
    // db15
    &[0.004538537361578899, 0.04674339489276627, 0.20602386398699574, 0.4926317717081396, 0.6458131403574243, 0.3390025354547315, -0.19320413960914543, -0.28888259656696563, 0.06528295284877282, 0.190146714007123, -0.039666176555790945, -0.1111209360372317, 0.033877143923507685, 0.05478055058450761, -0.025767007328439964, -0.020810050169693083, 0.015083918027835902, 0.005101000360407543, -0.006487734560315745, -0.00024175649076162427, 0.0019433239803822114, -0.000373482354137617, -0.0003595652443624688, 0.00015589648992059973, 2.5792699155318936e-05, -2.8133296266047814e-05, 3.36298718173758e-06, 1.8112704079405772e-06, -6.316882325881664e-07, 6.133359913305752e-08],
    // db16
    &[0.003189220925347738, 0.034907714323673344, 0.16506428348885313, 0.4303127228460038, 0.637356332083789, 0.4402902568863569, -0.08975108940248964, -0.3270633105279177, -0.027918208133028276, 0.2111906939471043, 0.027340263752716042, -0.1323883055638104, -0.006239722752474872, 0.07592423604427631, -0.007588974368857738, -0.03688839769173014, 0.01029765964095597, 0.013993768859828731, -0.006990014563413916, -0.00364427962149839, 0.003128023381206269, 0.00040789698084971285, -0.0009410217493595676, 0.00011424152003872239, 0.00017478724522533817, -6.103596621410936e-05, -1.3945668988208893e-05, 1.1336608661276258e-05, -1.0435713423116066e-06, -7.363656785451205e-07, 2.3087840868575457e-07, -2.109339630100743e-08],
    // db17
    &[0.0022418070010373128, 0.025985393703606044, 0.1312149033078244, 0.37035072415264114, 0.6109966156846228, 0.5183157640569378, 0.027314970403293636, -0.32832074836396175, -0.1265997522158827, 0.197310589565011, 0.10113548917747027, -0.1268156917782863, -0.05709141963167693, 0.08110598665416088, 0.022312336178103798, -0.04692243838926974, -0.0032709555358192938, 0.02273367658394627, -0.003042989981354637, -0.008602921520322855, 0.0029679966915260947, 0.0023012052421535457, -0.0014368453048029762, -0.00032813251940983797, 0.0004394654277686437, -2.5610109566548458e-05, -8.204803202453391e-05, 2.3186813798745952e-05, 6.9906009850767515e-06, -4.505942477222988e-06, 3.0165496099945573e-07, 2.957700933316857e-07, -8.42394844600268e-08, 7.2674929685616085e-09],
    // db18
    &[0.0015763102184407605, 0.019288531724146376, 0.10358846582242359, 0.3146789413370317, 0.5718268077666072, 0.5718016548886513, 0.14722311196992816, -0.29365404073655876, -0.21648093400514298, 0.14953397556537779, 0.1670813127632574, -0.09233188415084628, -0.10675224665982849, 0.06488721621190545, 0.057051247738536884, -0.044526141902982326, -0.023733210395860002, 0.02667070592647059, 0.006262167954305707, -0.013051480946612001, 0.00011863003385811746, 0.004943343605466738, -0.0011187326669924971, -0.0013405962983361066, 0.0006284656829651457, 0.0002135815619103407, -0.00019864855231174796, -1.5359171235347246e-07, 3.7412378807400385e-05, -8.520602537446696e-06, -3.332634478885822e-06, 1.7687129836276155e-06, -7.691632689885177e-08, -1.1760987670282317e-07, 3.068835863045175e-08, -2.5079344549485983e-09],
    // db19
    &[0.0011086697631817106, 0.014281098450764397, 0.08127811326545956, 0.26438843174089677, 0.5244363774646549, 0.6017045491275379, 0.26089495265103885, -0.22809139421548263, -0.28583863175582624, 0.07465226970810326, 0.21234974330627848, -0.03351854190230288, -0.1427856950387366, 0.027584350625628667, 0.08690675555581223, -0.02650123625012304, -0.04567422627723091, 0.02162376740958505, 0.019375549889176127, -0.013988388678535142, -0.005866922281012175, 0.007040747367105243, 0.0007689543592575484, -0.002687551800701582, 0.00034180865345859575, 0.0007358025205054352, -0.000260676135678628, -0.00012460079173415878, 8.711270467219923e-05, 5.105950487073886e-06, -1.6640176297154945e-05, 3.0109643162965265e-06, 1.531931476691193e-06, -6.862755657769143e-07, 1.4470882987978445e-08, 4.6369377757826045e-08, -1.1164020670358259e-08, 8.666848838997619e-10],
    // db20
    &[0.0007799536136668463, 0.010549394624950399, 0.06342378045908152, 0.21994211355139703, 0.4726961853109017, 0.6104932389385939, 0.36150229873933104, -0.13921208801148388, -0.32678680043403496, -0.016727088309077008, 0.22829105081991632, 0.0398502464577712, -0.15545875070726795, -0.024716827338613585, 0.10229171917444256, 0.005632246857307436, -0.06172289962468046, 0.005874681811811827, 0.03229429953076958, -0.00878932492390156, -0.01381052613715192, 0.006721627302259457, 0.004420542387045791, -0.0035814942596096226, -0.0008315621728225569, 0.0013925596193231364, -5.349759843997695e-05, -0.00038510474869921763, 0.00010153288973670291, 6.77428082837773e-05, -3.710586183394713e-05, -4.376143862183997e-06, 7.2412482876736205e-06, -1.0119940100188862e-06, -6.847079597000557e-07, 2.6339242262700013e-07, 2.0143220235505126e-10, -1.814843248299696e-08, 4.056127055551833e-09, -2.9988364896193194e-10],
];

pub(crate) static SYMLETS: [&[f64]; 19] = [
    // sym2
    &[0.48296291314469025, 0.836516303737469, 0.22414386804185735, -0.12940952255092145],
    // sym3
    &[0.3326705529509569, 0.8068915093133388, 0.4598775021193313, -0.13501102001039084, -0.08544127388224149, 0.035226291882100656],
    // sym4
    &[0.0322231006040427, -0.012603967262037833, -0.09921954357684722, 0.29785779560527736, 0.8037387518059161, 0.49761866763201545, -0.02963552764599851, -0.07576571478927333],
    // sym5
    &[0.019538882735286728, -0.021101834024758855, -0.17532808990845047, 0.01660210576452232, 0.6339789634582119, 0.7234076904024206, 0.1993975339773936, -0.039134249302383094, 0.029519490925774643, 0.027333068345077982],
    // sym6
    &[-0.007800708325034148, 0.0017677118642428036, 0.04472490177066578, -0.021060292512300564, -0.07263752278646252, 0.3379294217276218, 0.787641141030194, 0.4910559419267466, -0.048311742585633, -0.11799011114819057, 0.0034907120842174702, 0.015404109327027373],
    // sym7
    &[0.010268176708511255, 0.004010244871533663, -0.10780823770381774, -0.14004724044296152, 0.2886296317515146, 0.767764317003164, 0.5361019170917628, 0.017441255086855827, -0.049552834937127255, 0.0678926935013727, 0.03051551316596357, -0.01263630340325193, -0.0010473848886829163, 0.002681814568257878],
    // sym8
    &[0.0018899503327594609, -0.0003029205147213668, -0.01495225833704823, 0.003808752013890615, 0.049137179673607506, -0.027219029917056003, -0.05194583810770904, 0.3644418948353314, 0.7771857517005235, 0.4813596512583722, -0.061273359067658524, -0.1432942383508097, 0.007607487324917605, 0.03169508781149298, -0.0005421323317911481, -0.0033824159510061256],
    // sym9
    &[0.0010694900329086053, -0.0004731544986800831, -0.010264064027633142, 0.008859267493400484, 0.06207778930288603, -0.018233770779395985, -0.19155083129728512, 0.035272488035271894, 0.6173384491409358, 0.717897082764412, 0.238760914607303, -0.05456895843083407, 0.0005834627461258068, 0.03022487885827568, -0.01152821020767923, -0.013271967781817119, 0.0006197808889855868, 0.0014009155259146807],
    // sym10
    &[-0.0004593294210046588, 5.7036083618494284e-05, 0.004593173585311828, -0.0008043589320165449, -0.02035493981231129, 0.005764912033581909, 0.04999497207737669, -0.0319900568824278, -0.03553674047381755, 0.38382676106708546, 0.7695100370211071, 0.47169066693843925, -0.07088053578324385, -0.15949427888491757, 0.011609893903711381, 0.0459272392310922, -0.0014653825813050513, -0.008641299277022422, 9.563267072289475e-05, 0.0007701598091144901],
    // sym11
    &[0.0004892636102619239, 0.00011053509764272153, -0.006389603666454892, -0.0020034719001093887, 0.04300019068155228, 0.03526675956446655, -0.1446023437053156, -0.2046547944958006, 0.23768990904924897, 0.7303435490883957, 0.5720229780100871, 0.09719839445890947, -0.022832651022562687, 0.06997679961073414, 0.0370374159788594, -0.024080841595864003, -0.009857934828789794, 0.00651249567477145, 0.0005883527353969915, -0.0017343662672978692, -3.8795655736158566e-05, 0.00017172195069934854],
    // sym12
    &[-0.0001790665869750869, -1.8158078862617515e-05, 0.002350297614183465, 0.00030764779631059454, -0.014589836449234145, -0.0026043910313322326, 0.05780417944550566, 0.01530174062247884, -0.17037069723886492, -0.07833262231634322, 0.46274103121927235, 0.7634790977836572, 0.39888597239022, -0.022162306170337816, -0.03584883073695439, 0.04917931829966084, 0.0075537806116804775, -0.024220722675013445, -0.0014089092443297553, 0.007414965517654251, 0.00018021409008538188, -0.0013497557555715387, -1.1353928041541452e-05, 0.00011196719424656033],
    // sym13
    &[7.042986690694402e-05, 3.690537342319624e-05, -0.0007213643851362283, 0.00041326119884196064, 0.0056748537601224395, -0.0014924472742598532, -0.020749686325515677, 0.017618296880653084, 0.09292603089913712, 0.008819757670420546, -0.14049009311363403, 0.11023022302137217, 0.6445643839011856, 0.6957391505614964, 0.19770481877117801, -0.12436246075153011, -0.0597506277179437, 0.013862497435849205, -0.017211642726299048, -0.02021676813338983, 0.005296359738725025, 0.0075262253899681, -0.0001709428585302221, -0.0011360634389281183, -3.573862364868901e-05, 6.820325263075319e-05],
    // sym14
    &[4.4618977991475265e-05, 1.9329016965523917e-05, -0.0006057601824664335, -7.321421356702399e-05, 0.004532677471945648, 0.0010131419871842082, -0.019439314263626713, -0.002365048836740385, 0.06982761636180755, 0.02589858753104667, -0.15999741114652205, -0.05811182331771783, 0.4753357626342066, 0.7599762419610909, 0.39320152196208885, -0.03531811211497973, -0.057634498351326995, 0.03743308836285345, 0.004280520499019378, -0.029196217764038187, -0.002753774791224071, 0.01003769371767227, 0.0003664765736601183, -0.002579441725933078, -6.286542481477636e-05, 0.00039843567297594335, 1.1210865808890361e-05, -2.5879090265397886e-05],
    // sym15
    &[2.866070852531808e-05, 2.171789015077892e-05, -0.00040216853760293483, -0.00010815440168545525, 0.003481028737064895, 0.0015261382781819983, -0.01717125278163873, -0.008744788886477952, 0.06796982904487918, 0.06839331006048024, -0.1340562984562539, -0.1966263587662373, 0.2439627054321663, 0.7218430296361812, 0.5786404152150345, 0.11153369514261872, -0.04108266663538248, 0.04073547969681068, 0.021937642719753955, -0.03887671687683349, -0.01940501143093447, 0.01007997708790567, 0.003423450736351241, -0.0035901654473726417, -0.0002673164464718057, 0.0010705672194623959, 5.512254785558665e-05, -0.00016066186637495343, -7.35966679891947e-06, 9.712419737963348e-06],
    // sym16
    &[-1.0797982104319795e-05, -5.396483179315242e-06, 0.00016545679579108483, 3.656592483348223e-05, -0.0013387206066921965, -0.00022211647621176323, 0.0069377611308027096, 0.001359844742484172, -0.024952758046290123, -0.003510275068374009, 0.07803785290341991, 0.03072113906330156, -0.15959219218520598, -0.054040601387606135, 0.47534280601152273, 0.7565249878756971, 0.39712293362064416, -0.034574228416972504, -0.06698304907021778, 0.032333091610663785, 0.004869274404904607, -0.031051202843553064, -0.0031265171722710075, 0.012666731659857348, 0.0007182119788317892, -0.0038809122526038786, -0.0001084456223089688, 0.0008523547108047095, 2.8078582128442894e-05, -0.00010943147929529757, -3.113556407621969e-06, 6.230006701220761e-06],
    // sym17
    &[3.7912531943321266e-06, -2.4527163425833e-06, -7.607124405605129e-05, 2.520793314082878e-05, 0.0007198270642148971, 5.8400428694052584e-05, -0.003932325279797902, -0.001905407689852666, 0.012396988366648726, 0.009952982523509598, -0.01803889724191924, -0.007261634750928767, 0.016158808725919346, -0.08607087472073338, -0.15507600534974825, 0.18053958458111286, 0.681488995344925, 0.6507166292045456, 0.1423983504146782, -0.11856693261143636, 0.0172711782105185, 0.10475461484223211, 0.01790395221434112, -0.03329138349235933, -0.004819212803176148, 0.010482366933031529, 0.0008567700701915741, -0.0027416759756816018, -0.000138642302680455, 0.0004759963802638669, -1.3506383399901165e-05, -6.293702597554192e-05, 2.7801266938414138e-06, 4.297343327345983e-06],
    // sym18
    &[-1.5131530692371587e-06, 7.847298055831765e-07, 2.955743762093081e-05, -9.858816030140058e-06, -0.0002658301102424104, 4.741614518373667e-05, 0.0014280863270832796, -0.00018877623940755607, -0.005239789683026608, 0.001087784789595693, 0.015012356344250213, -0.0032607442000749834, -0.03171268473181454, 0.006277944554311694, 0.028529597039037808, -0.07379920729060717, -0.032480573290138676, 0.40148386057061813, 0.7536291401017928, 0.47396905989393956, -0.052029158983952786, -0.15993814866932407, 0.03399566710394736, 0.08421992997038655, -0.005077085160757053, -0.030325091089369604, 0.001642986397278216, 0.009502164390962365, -0.00041152110923597756, -0.002313871814506099, 7.021273459036268e-05, 0.00039616840638254753, -1.4020992577726755e-05, -4.5246757874949856e-05, 1.354915761832114e-06, 2.6126125564836423e-06],
    // sym19
    &[1.7509367995348687e-06, 2.0623170632395688e-06, -2.8151138661550245e-05, -1.6821387029373716e-05, 0.0002762187768573407, 0.00012930767650701415, -0.0017049602611649971, -0.0006179223277983108, 0.008262236955528255, 0.004319351874894969, -0.02770989693131125, -0.016908234861345205, 0.08407267627924504, 0.09363084341589714, -0.11624173010739675, -0.17659686625203097, 0.2582661692372836, 0.7195555257163943, 0.578144945338605, 0.10902582508127781, -0.06752505804029409, 0.008954591173043624, 0.0070155738571741596, -0.046635983534938946, -0.02265199337824595, 0.01579743929567463, 0.007968438320613306, -0.005122205002583014, -0.0011607032572062486, 0.0021214250281823303, 0.00015915804768084938, -0.000635764515004334, -4.612039600210587e-05, 0.0001155392333357879, 8.873312173729286e-06, -1.1880518269823984e-05, -6.463651303345963e-07, 5.487732768215838e-07],
    // sym20
    &[-6.329129044776395e-07, -3.2567026420174407e-07, 1.22872527779612e-05, 4.525422209151636e-06, -0.00011739133516291466, -2.6615550335516086e-05, 0.0007476108597820572, 0.0001254409172306726, -0.0034716478028440734, -0.0006111263857992088, 0.012157040948785737, 0.0019385970672402002, -0.035373336756604236, -0.0068437019650692274, 0.08891966802819956, 0.03625095165393308, -0.16057829841525254, -0.0510883429210674, 0.47199147510148703, 0.75116272842273, 0.4058314443484506, -0.02981936888033373, -0.07899434492839816, 0.025579349509413946, 0.008123228356009682, -0.031629437144957966, -0.003313857383623359, 0.01700404902339034, 0.0014230873594621453, -0.006606585799088861, -0.0003052628317957281, 0.002088994708190198, 7.215991188074035e-05, -0.0004947310915672655, -1.928412300645204e-05, 7.992967835772481e-05, 3.025666062736966e-06, -7.919361411976999e-06, -1.9015675890554106e-07, 3.695537474835221e-07],
];

pub(crate) static COIFLETS: [&[f64]; 5] = [
    // coif1
    &[-0.07273261951252645, 0.3378976624574818, 0.8525720202116004, 0.3848648468648578, -0.07273261951252645, -0.015655728135791993],
    // coif2
    &[0.01638733646320364, -0.04146493678687178, -0.0673725547237256, 0.3861100668227629, 0.8127236354494135, 0.4170051844232391, -0.07648859907828076, -0.05943441864643109, 0.02368017194684777, 0.005611434819368834, -0.0018232088709110323, -0.000720549445520347],
    // coif3
    &[-0.003793512864380802, 0.007782596425672746, 0.023452696142077168, -0.06577191128146936, -0.06112339000297255, 0.40517690240911824, 0.7937772226260872, 0.42848347637737, -0.07179982161915484, -0.08230192710629983, 0.03455502757329774, 0.015880544863669452, -0.009007976136730624, -0.0025745176881367972, 0.0011175187708306303, 0.0004662169598204029, -7.0983302506379e-05, -3.459977319727278e-05],
    // coif4
    &[0.000892313902537003, -0.001629492425226786, -0.007346167936268051, 0.01606894713157503, 0.02668230466960483, -0.08126671024919373, -0.05607731960356926, 0.41530842700068227, 0.7822389344242826, 0.43438603311435653, -0.06662747236681717, -0.09622042453595264, 0.03933442260558915, 0.02508225333794961, -0.015211728187697211, -0.0056582838001308835, 0.0037514346971460866, 0.0012665610789256603, -0.0005890202246332165, -0.0002599743371222568, 6.233885431278719e-05, 3.1229861599195265e-05, -3.259647940030751e-06, -1.7849909144933469e-06],
    // coif5
    &[-0.000212081862067494, 0.0003585777411617577, 0.0021782943778456947, -0.00415931262757864, -0.010131584846900276, 0.023408322118927783, 0.028169744270532353, -0.09192158806008609, -0.052046670253554764, 0.42157126673075435, 0.7742936228603274, 0.4379823066591634, -0.06203775157498196, -0.10556315130733723, 0.041287530472117834, 0.032674799467057355, -0.019758391600965465, -0.009159507338676163, 0.006761520220620417, 0.0024315754425382886, -0.0016616273039298788, -0.0006375589261258812, 0.0003018579416682448, 0.00014035632812373243, -4.12198619242655e-05, -2.1270221672515614e-05, 3.7007277113394796e-06, 2.0612203985788783e-06, -1.6237995172048338e-07, -9.604010112767894e-08],
];

pub(crate) static DMEY: [&[f64]; 1] = [
    // dmey
    &[-1.009999956941423e-12, 8.519459636796214e-09, -1.111944952595278e-08, -1.0798819539621958e-08, 6.066975741351135e-08, -1.0866516536735883e-07, 8.200680650386481e-08, 1.1783004497663934e-07, -5.506340565252278e-07, 1.1307947017916706e-06, -1.489549216497156e-06, 7.367572885903746e-07, 3.20544191334478e-06, -1.6312699734552807e-05, 6.554305930575149e-05, -0.0006011502343516092, -0.002704672124643725, 0.002202534100911002, 0.006045814097323304, -0.006387718318497156, -0.011061496392513451, 0.015270015130934803, 0.017423434103729693, -0.03213079399021176, -0.024348745906078023, 0.0637390243228016, 0.030655091960824263, -0.13284520043622938, -0.035087555656258346, 0.44459300275757724, 0.7445855923188063, 0.44459300275757724, -0.035087555656258346, -0.13284520043622938, 0.030655091960824263, 0.0637390243228016, -0.024348745906078023, -0.03213079399021176, 0.017423434103729693, 0.015270015130934803, -0.011061496392513451, -0.006387718318497156, 0.006045814097323304, 0.002202534100911002, -0.002704672124643725, -0.0006011502343516092, 6.554305930575149e-05, -1.6312699734552807e-05, 3.20544191334478e-06, 7.367572885903746e-07, -1.489549216497156e-06, 1.1307947017916706e-06, -5.506340565252278e-07, 1.1783004497663934e-07, 8.200680650386481e-08, -1.0866516536735883e-07, 6.066975741351135e-08, -1.0798819539621958e-08, -1.111944952595278e-08, 8.519459636796214e-09, -1.009999956941423e-12, 0.0],
];

pub(crate) static BIORTHOGONAL: [(u8, u8, &[f64], &[f64]); 15] = [
    (
        1,
        1,
        &[0.7071067811865476, 0.7071067811865476],
        &[0.7071067811865476, -0.7071067811865476],
    ),
    (
        1,
        3,
        &[-0.08838834764831845, 0.08838834764831845, 0.7071067811865476, 0.7071067811865476, 0.08838834764831845, -0.08838834764831845],
        &[0.0, -0.0, 0.7071067811865476, -0.7071067811865476, 0.0, -0.0],
    ),
    (
        1,
        5,
        &[0.016572815184059706, -0.016572815184059706, -0.12153397801643785, 0.12153397801643785, 0.7071067811865476, 0.7071067811865476, 0.12153397801643785, -0.12153397801643785, -0.016572815184059706, 0.016572815184059706],
        &[0.0, -0.0, 0.0, -0.0, 0.7071067811865476, -0.7071067811865476, 0.0, -0.0, 0.0, -0.0],
    ),
    (
        2,
        2,
        &[-0.1767766952966369, 0.3535533905932738, 1.0606601717798212, 0.3535533905932738, -0.1767766952966369, 0.0],
        &[0.0, -0.0, 0.3535533905932738, -0.7071067811865476, 0.3535533905932738, -0.0],
    ),
    (
        2,
        4,
        &[0.03314563036811941, -0.06629126073623882, -0.1767766952966369, 0.4198446513295126, 0.9943689110435825, 0.4198446513295126, -0.1767766952966369, -0.06629126073623882, 0.03314563036811941, 0.0],
        &[0.0, -0.0, 0.0, -0.0, 0.3535533905932738, -0.7071067811865476, 0.3535533905932738, -0.0, 0.0, -0.0],
    ),
    (
        2,
        6,
        &[-0.006905339660024878, 0.013810679320049757, 0.04695630968816917, -0.1077232986963881, -0.16987135563661201, 0.4474660099696121, 0.966747552403483, 0.4474660099696121, -0.16987135563661201, -0.1077232986963881, 0.04695630968816917, 0.013810679320049757, -0.006905339660024878, 0.0],
        &[0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.3535533905932738, -0.7071067811865476, 0.3535533905932738, -0.0, 0.0, -0.0, 0.0, -0.0],
    ),
    (
        2,
        8,
        &[0.0015105430506304422, -0.0030210861012608843, -0.012947511862546647, 0.02891610982635418, 0.05299848189069094, -0.13491307360773605, -0.16382918343409023, 0.46257144047591653, 0.9516421218971786, 0.46257144047591653, -0.16382918343409023, -0.13491307360773605, 0.05299848189069094, 0.02891610982635418, -0.012947511862546647, -0.0030210861012608843, 0.0015105430506304422, 0.0],
        &[0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.3535533905932738, -0.7071067811865476, 0.3535533905932738, -0.0, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0],
    ),
    (
        3,
        1,
        &[-0.3535533905932738, 1.0606601717798212, 1.0606601717798212, -0.3535533905932738],
        &[0.1767766952966369, -0.5303300858899106, 0.5303300858899106, -0.1767766952966369],
    ),
    (
        3,
        3,
        &[0.06629126073623882, -0.1988737822087165, -0.15467960838455727, 0.9943689110435825, 0.9943689110435825, -0.15467960838455727, -0.1988737822087165, 0.06629126073623882],
        &[0.0, -0.0, 0.1767766952966369, -0.5303300858899106, 0.5303300858899106, -0.1767766952966369, 0.0, -0.0],
    ),
    (
        3,
        5,
        &[-0.013810679320049757, 0.04143203796014927, 0.052480581416189075, -0.26792717880896527, -0.07181553246425873, 0.966747552403483, 0.966747552403483, -0.07181553246425873, -0.26792717880896527, 0.052480581416189075, 0.04143203796014927, -0.013810679320049757],
        &[0.0, -0.0, 0.0, -0.0, 0.1767766952966369, -0.5303300858899106, 0.5303300858899106, -0.1767766952966369, 0.0, -0.0, 0.0, -0.0],
    ),
    (
        3,
        7,
        &[0.0030210861012608843, -0.009063258303782653, -0.01683176542131064, 0.074663985074019, 0.03133297870736289, -0.301159125922835, -0.02649924094534547, 0.9516421218971786, 0.9516421218971786, -0.02649924094534547, -0.301159125922835, 0.03133297870736289, 0.074663985074019, -0.01683176542131064, -0.009063258303782653, 0.0030210861012608843],
        &[0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.1767766952966369, -0.5303300858899106, 0.5303300858899106, -0.1767766952966369, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0],
    ),
    (
        3,
        9,
        &[-0.0006797443727836989, 0.002039233118351097, 0.005060319219611981, -0.020618912641105536, -0.014112787930175844, 0.09913478249423216, 0.012300136269419315, -0.32019196836077857, 0.0020500227115698858, 0.9421257006782068, 0.9421257006782068, 0.0020500227115698858, -0.32019196836077857, 0.012300136269419315, 0.09913478249423216, -0.014112787930175844, -0.020618912641105536, 0.005060319219611981, 0.002039233118351097, -0.0006797443727836989],
        &[0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.1767766952966369, -0.5303300858899106, 0.5303300858899106, -0.1767766952966369, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0, 0.0, -0.0],
    ),
    (
        4,
        4,
        &[0.03782845550726404, -0.023849465019556843, -0.11062440441843718, 0.37740285561283066, 0.8526986790088938, 0.37740285561283066, -0.11062440441843718, -0.023849465019556843, 0.03782845550726404, 0.0],
        &[0.0, -0.0, -0.06453888262869706, 0.04068941760916406, 0.41809227322161724, -0.7884856164055829, 0.41809227322161724, 0.04068941760916406, -0.06453888262869706, -0.0],
    ),
    (
        5,
        5,
        &[0.0, 0.03968708834740544, 0.007948108637240322, -0.05446378846823691, 0.34560528195603346, 0.7366601814282105, 0.34560528195603346, -0.05446378846823691, 0.007948108637240322, 0.03968708834740544, 0.0, 0.0],
        &[0.0, -0.013456709459118716, -0.002694966880111507, 0.13670658466432914, -0.09350469740093886, -0.47680326579848425, 0.8995061097486484, -0.47680326579848425, -0.09350469740093886, 0.13670658466432914, -0.002694966880111507, -0.013456709459118716],
    ),
    (
        6,
        8,
        &[0.0019088317364812906, -0.0019142861290887667, -0.016990639867602342, 0.01193456527972926, 0.04973290349094079, -0.07726317316720414, -0.09405920349573646, 0.4207962846098268, 0.8259229974584023, 0.4207962846098268, -0.09405920349573646, -0.07726317316720414, 0.04973290349094079, 0.01193456527972926, -0.016990639867602342, -0.0019142861290887667, 0.0019088317364812906, 0.0],
        &[0.0, -0.0, 0.0, -0.0, 0.014426282505624435, -0.014467504896790148, -0.07872200106262882, 0.04036797903033992, 0.41784910915027457, -0.7589077294536541, 0.41784910915027457, 0.04036797903033992, -0.07872200106262882, -0.014467504896790148, 0.014426282505624435, -0.0, 0.0, -0.0],
    ),
];

pub(crate) static REVERSE_BIORTHOGONAL: [(u8, u8, &[f64], &[f64]); 15] = [
    (
        1,
        1,
        &[0.7071067811865476, 0.7071067811865476],
        &[0.7071067811865476, -0.7071067811865476],
    ),
    (
        1,
        3,
        &[0.0, 0.0, 0.7071067811865476, 0.7071067811865476, 0.0, 0.0],
        &[-0.08838834764831845, -0.08838834764831845, 0.7071067811865476, -0.7071067811865476, 0.08838834764831845, 0.08838834764831845],
    ),
    (
        1,
        5,
        &[0.0, 0.0, 0.0, 0.0, 0.7071067811865476, 0.7071067811865476, 0.0, 0.0, 0.0, 0.0],
        &[0.016572815184059706, 0.016572815184059706, -0.12153397801643785, -0.12153397801643785, 0.7071067811865476, -0.7071067811865476, 0.12153397801643785, 0.12153397801643785, -0.016572815184059706, -0.016572815184059706],
    ),
    (
        2,
        2,
        &[0.0, 0.3535533905932738, 0.7071067811865476, 0.3535533905932738, 0.0, 0.0],
        &[0.0, 0.1767766952966369, 0.3535533905932738, -1.0606601717798212, 0.3535533905932738, 0.1767766952966369],
    ),
    (
        2,
        4,
        &[0.0, 0.0, 0.0, 0.3535533905932738, 0.7071067811865476, 0.3535533905932738, 0.0, 0.0, 0.0, 0.0],
        &[0.0, -0.03314563036811941, -0.06629126073623882, 0.1767766952966369, 0.4198446513295126, -0.9943689110435825, 0.4198446513295126, 0.1767766952966369, -0.06629126073623882, -0.03314563036811941],
    ),
    (
        2,
        6,
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.3535533905932738, 0.7071067811865476, 0.3535533905932738, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.006905339660024878, 0.013810679320049757, -0.04695630968816917, -0.1077232986963881, 0.16987135563661201, 0.4474660099696121, -0.966747552403483, 0.4474660099696121, 0.16987135563661201, -0.1077232986963881, -0.04695630968816917, 0.013810679320049757, 0.006905339660024878],
    ),
    (
        2,
        8,
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.3535533905932738, 0.7071067811865476, 0.3535533905932738, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, -0.0015105430506304422, -0.0030210861012608843, 0.012947511862546647, 0.02891610982635418, -0.05299848189069094, -0.13491307360773605, 0.16382918343409023, 0.46257144047591653, -0.9516421218971786, 0.46257144047591653, 0.16382918343409023, -0.13491307360773605, -0.05299848189069094, 0.02891610982635418, 0.012947511862546647, -0.0030210861012608843, -0.0015105430506304422],
    ),
    (
        3,
        1,
        &[0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369],
        &[-0.3535533905932738, -1.0606601717798212, 1.0606601717798212, 0.3535533905932738],
    ),
    (
        3,
        3,
        &[0.0, 0.0, 0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369, 0.0, 0.0],
        &[0.06629126073623882, 0.1988737822087165, -0.15467960838455727, -0.9943689110435825, 0.9943689110435825, 0.15467960838455727, -0.1988737822087165, -0.06629126073623882],
    ),
    (
        3,
        5,
        &[0.0, 0.0, 0.0, 0.0, 0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0],
        &[-0.013810679320049757, -0.04143203796014927, 0.052480581416189075, 0.26792717880896527, -0.07181553246425873, -0.966747552403483, 0.966747552403483, 0.07181553246425873, -0.26792717880896527, -0.052480581416189075, 0.04143203796014927, 0.013810679320049757],
    ),
    (
        3,
        7,
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0030210861012608843, 0.009063258303782653, -0.01683176542131064, -0.074663985074019, 0.03133297870736289, 0.301159125922835, -0.02649924094534547, -0.9516421218971786, 0.9516421218971786, 0.02649924094534547, -0.301159125922835, -0.03133297870736289, 0.074663985074019, 0.01683176542131064, -0.009063258303782653, -0.0030210861012608843],
    ),
    (
        3,
        9,
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[-0.0006797443727836989, -0.002039233118351097, 0.005060319219611981, 0.020618912641105536, -0.014112787930175844, -0.09913478249423216, 0.012300136269419315, 0.32019196836077857, 0.0020500227115698858, -0.9421257006782068, 0.9421257006782068, -0.0020500227115698858, -0.32019196836077857, -0.012300136269419315, 0.09913478249423216, 0.014112787930175844, -0.020618912641105536, -0.005060319219611981, 0.002039233118351097, 0.0006797443727836989],
    ),
    (
        4,
        4,
        &[0.0, -0.06453888262869706, -0.04068941760916406, 0.41809227322161724, 0.7884856164055829, 0.41809227322161724, -0.04068941760916406, -0.06453888262869706, 0.0, 0.0],
        &[0.0, -0.03782845550726404, -0.023849465019556843, 0.11062440441843718, 0.37740285561283066, -0.8526986790088938, 0.37740285561283066, 0.11062440441843718, -0.023849465019556843, -0.03782845550726404],
    ),
    (
        5,
        5,
        &[0.013456709459118716, -0.002694966880111507, -0.13670658466432914, -0.09350469740093886, 0.47680326579848425, 0.8995061097486484, 0.47680326579848425, -0.09350469740093886, -0.13670658466432914, -0.002694966880111507, 0.013456709459118716, 0.0],
        &[0.0, -0.0, 0.03968708834740544, -0.007948108637240322, -0.05446378846823691, -0.34560528195603346, 0.7366601814282105, -0.34560528195603346, -0.05446378846823691, -0.007948108637240322, 0.03968708834740544, -0.0],
    ),
    (
        6,
        8,
        &[0.0, 0.0, 0.0, 0.014426282505624435, 0.014467504896790148, -0.07872200106262882, -0.04036797903033992, 0.41784910915027457, 0.7589077294536541, 0.41784910915027457, -0.04036797903033992, -0.07872200106262882, 0.014467504896790148, 0.014426282505624435, 0.0, 0.0, 0.0, 0.0],
        &[0.0, -0.0019088317364812906, -0.0019142861290887667, 0.016990639867602342, 0.01193456527972926, -0.04973290349094079, -0.07726317316720414, 0.09405920349573646, 0.4207962846098268, -0.8259229974584023, 0.4207962846098268, 0.09405920349573646, -0.07726317316720414, -0.04973290349094079, 0.01193456527972926, 0.016990639867602342, -0.0019142861290887667, -0.0019088317364812906],
    ),
];
