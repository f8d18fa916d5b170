#include <map>
#include <stdexcept>

#include "programs.hpp"

namespace qtk::bench {

namespace {

const std::map<std::string, const char*>& suites() {
    static const std::map<std::string, const char*> s{
        {"QRandom", R"y(subroutine: QRandom
mark: "QRandom : (n) -> (r')"
partitions:
  - variable: n
    classes:
      - {label: "n=0", values: [0]}
      - {label: "n>0", values: [5]}
cases:
  - name: "n=0"
    classes: ["n=0"]
    inputs: {n: 0}
    expect: {r: "range(0, 1)"}
    repetitions: 20
  - name: "n=5"
    classes: ["n>0"]
    inputs: {n: 5}
    expect: {r: "range(0, 31)"}
    repetitions: 100
  - name: "n=2 uniform"
    classes: ["n>0"]
    inputs: {n: 2}
    expect: {r: "dist([0, 0.25], [1, 0.25], [2, 0.25], [3, 0.25])"}
    repetitions: 800
)y"},
        {"GenQInt", R"y(subroutine: GenQInt
mark: "GenQInt : (n, x) -> (q:qs')"
cases:
  - name: "n=5,x=0"
    inputs: {n: 5, x: 0}
    expect: {qs: "0"}
    repetitions: 5
  - name: "n=6,x=23"
    inputs: {n: 6, x: 23}
    expect: {qs: "23"}
    repetitions: 5
)y"},
        {"GenXPlusY", R"y(subroutine: GenXPlusY
mark: "GenXPlusY : (n, x, y) -> (q:qs')"
partitions:
  - variable: x
    classes:
      - {label: "x=y", values: [20]}
      - {label: "x!=y", values: [5]}
cases:
  - name: "x=y=20"
    classes: ["x=y"]
    inputs: {n: 5, x: 20, y: 20}
    expect: {qs: "20"}
    repetitions: 5
  - name: "x=5,y=12"
    classes: ["x!=y"]
    inputs: {n: 4, x: 5, y: 12}
    expect: {qs: "state(two_value(n=4, x=5, y=12))"}
    repetitions: 50
  - name: "x=12,y=5 counts"
    classes: ["x!=y"]
    inputs: {n: 4, x: 12, y: 5}
    expect: {qs: "dist([5, 0.5], [12, 0.5])"}
    repetitions: 400
)y"},
        {"GenMaxSup", R"y(subroutine: GenMaxSup
mark: "GenMaxSup : (n) -> (q:qs')"
cases:
  - name: "n=1"
    inputs: {n: 1}
    expect: {qs: "state(pauli(3))"}
    repetitions: 20
  - name: "n=5"
    inputs: {n: 5}
    expect: {qs: "state(pauli(3, 3, 3, 3, 3))"}
    repetitions: 20
)y"},
        {"GenMaxMix", R"y(subroutine: GenMaxMix
mark: "GenMaxMix : (n) -> (q:qs')"
cases:
  - name: "n=1"
    inputs: {n: 1}
    expect: {qs: "dist([0, 0.5], [1, 0.5])"}
    repetitions: 400
  - name: "n=5"
    inputs: {n: 5}
    expect: {qs: "range(0, 31)"}
    repetitions: 100
)y"},
        {"SwapTest", R"y(subroutine: SwapTest
mark: "SwapTest : (n, sub:q:GenRho1, sub:q:GenRho2) -> (result')"
cases:
  - name: "|011> vs |110>"
    inputs: {n: 3}
    subroutines: {GenRho1: "ket_x(n=3, x=3)", GenRho2: "ket_x(n=3, x=6)"}
    expect: {result: "dist([0, 0.5], [1, 0.5])"}
    repetitions: 1000
  - name: "|1001> twice"
    inputs: {n: 4}
    subroutines: {GenRho1: "ket_x(n=4, x=9)", GenRho2: "ket_x(n=4, x=9)"}
    expect: {result: "0"}
    repetitions: 200
  - name: "|0> vs |+>"
    inputs: {n: 1}
    subroutines: {GenRho1: "ket_x(n=1, x=0)", GenRho2: "pauli(3)"}
    expect: {result: "dist([0, 0.75], [1, 0.25])"}
    repetitions: 1000
  - name: "mixed twice"
    inputs: {n: 1}
    subroutines: {GenRho1: "max_mixed(n=1)", GenRho2: "max_mixed(n=1)"}
    expect: {result: "dist([0, 0.75], [1, 0.25])"}
    repetitions: 1000
  - name: "|+> vs mixed"
    inputs: {n: 1}
    subroutines: {GenRho1: "pauli(3)", GenRho2: "max_mixed(n=1)"}
    expect: {result: "dist([0, 0.75], [1, 0.25])"}
    repetitions: 1000
)y"},
        {"Purity", R"y(subroutine: Purity
mark: "Purity : (n, t, sub:q:GenRho) -> (isPure')"
partitions:
  - variable: GenRho
    classes:
      - {label: classical, generator: "ket_x(n=4, x=5)"}
      - {label: superposition, generator: "two_value(n=2, x=0, y=3)"}
      - {label: mixed, generator: "max_mixed(n=1)"}
cases:
  - name: "|0101>"
    classes: [classical]
    inputs: {n: 4, t: 100}
    subroutines: {GenRho: "ket_x(n=4, x=5)"}
    expect: {isPure: "true"}
    repetitions: 3
  - name: "Bell"
    classes: [superposition]
    inputs: {n: 2, t: 100}
    subroutines: {GenRho: "two_value(n=2, x=0, y=3)"}
    expect: {isPure: "true"}
    repetitions: 3
  - name: "mixed qubit"
    classes: [mixed]
    inputs: {n: 1, t: 100}
    subroutines: {GenRho: "max_mixed(n=1)"}
    expect: {isPure: "false"}
    repetitions: 3
)y"},
        {"InnerProduct", R"y(subroutine: InnerProduct
mark: "InnerProduct : (n, t, sub:q:GenRho1, sub:q:GenRho2) -> (est')"
cases:
  - name: "|0011> vs |1010>"
    inputs: {n: 4, t: 400}
    subroutines: {GenRho1: "ket_x(n=4, x=3)", GenRho2: "ket_x(n=4, x=10)"}
    expect: {est: "approx(0, 0.2)"}
    repetitions: 3
  - name: "|1001> twice"
    inputs: {n: 4, t: 400}
    subroutines: {GenRho1: "ket_x(n=4, x=9)", GenRho2: "ket_x(n=4, x=9)"}
    expect: {est: "approx(1, 0.2)"}
    repetitions: 3
  - name: "|0> vs |+>"
    inputs: {n: 1, t: 400}
    subroutines: {GenRho1: "ket_x(n=1, x=0)", GenRho2: "pauli(3)"}
    expect: {est: "approx(0.5, 0.2)"}
    repetitions: 3
  - name: "mixed twice"
    inputs: {n: 1, t: 400}
    subroutines: {GenRho1: "max_mixed(n=1)", GenRho2: "max_mixed(n=1)"}
    expect: {est: "approx(0.5, 0.2)"}
    repetitions: 3
  - name: "|+> vs mixed"
    inputs: {n: 1, t: 400}
    subroutines: {GenRho1: "pauli(3)", GenRho2: "max_mixed(n=1)"}
    expect: {est: "approx(0.5, 0.2)"}
    repetitions: 3
)y"},
        {"Empty", R"y(subroutine: Empty
mark: "Empty : (n, q:qs) -> (q:qs')"
cases:
  - name: "classical"
    inputs: {n: 3}
    quantum: {qs: "ket_x(n=3, x=5)"}
    expect: {qs: "state(ket_x(n=3, x=5))"}
    repetitions: 10
  - name: "complementary"
    inputs: {n: 3}
    quantum: {qs: "comp_sup(n=3, x=2, theta=pi/2)"}
    expect: {qs: "state(comp_sup(n=3, x=2, theta=pi/2))"}
    repetitions: 10
  - name: "pauli"
    inputs: {n: 3}
    quantum: {qs: "pauli(4, 5, 6)"}
    expect: {qs: "state(pauli(4, 5, 6))"}
    repetitions: 10
)y"},
        {"Reverse", R"y(subroutine: Reverse
mark: "Reverse : (n, q:qs) -> (q:qs')"
partitions:
  - variable: n
    classes:
      - {label: "n=1", values: [1]}
      - {label: "n>1 odd", values: [5]}
      - {label: "n even", values: [6]}
cases:
  - name: "|1>"
    classes: ["n=1"]
    inputs: {n: 1}
    quantum: {qs: "ket_x(n=1, x=1)"}
    expect: {qs: "1"}
    repetitions: 5
  - name: "|11001>"
    classes: ["n>1 odd"]
    inputs: {n: 5}
    quantum: {qs: "ket_x(n=5, x=25)"}
    expect: {qs: "19"}
    repetitions: 5
  - name: "|010011>"
    classes: ["n even"]
    inputs: {n: 6}
    quantum: {qs: "ket_x(n=6, x=19)"}
    expect: {qs: "50"}
    repetitions: 5
  - name: "superposition"
    classes: ["n>1 odd"]
    inputs: {n: 3}
    quantum: {qs: "two_value(n=3, x=1, y=6)"}
    expect: {qs: "state(two_value(n=3, x=4, y=3))"}
    repetitions: 20
)y"},
        {"MultiSWAP", R"y(subroutine: MultiSWAP
mark: "MultiSWAP : (n, q:qs1, q:qs2) -> (q:qs1', q:qs2')"
cases:
  - name: "pauli products"
    inputs: {n: 3}
    quantum: {qs1: "pauli(3, 5, 2)", qs2: "pauli(6, 1, 4)"}
    expect: {qs1: "state(pauli(6, 1, 4))", qs2: "state(pauli(3, 5, 2))"}
    repetitions: 20
  - name: "superpositions"
    inputs: {n: 2}
    quantum: {qs1: "comp_sup(n=2, x=1, theta=pi/2)", qs2: "two_value(n=2, x=0, y=3)"}
    expect: {qs1: "state(two_value(n=2, x=0, y=3))", qs2: "state(comp_sup(n=2, x=1, theta=pi/2))"}
    repetitions: 20
)y"},
        {"CRk", R"y(subroutine: CRk
mark: "CRk : (k, q:qctrl, q:qtar) -> (q:qctrl', q:qtar')"
partitions:
  - variable: qctrl
    classes:
      - {label: "c=0", generator: "ket_x(n=1, x=0)"}
      - {label: "c=1", generator: "ket_x(n=1, x=1)"}
cases:
  - name: "k=2,|0>|+>"
    classes: ["c=0"]
    inputs: {k: 2}
    quantum: {qctrl: "ket_x(n=1, x=0)", qtar: "pauli(3)"}
    expect: {qctrl: "0", qtar: "state(pauli(3))"}
    repetitions: 20
  - name: "k=1,|1>|+>"
    classes: ["c=1"]
    inputs: {k: 1}
    quantum: {qctrl: "ket_x(n=1, x=1)", qtar: "pauli(3)"}
    expect: {qctrl: "1", qtar: "state(pauli(5))"}
    repetitions: 20
)y"},
        {"PhaseFlip", R"y(subroutine: PhaseFlip
mark: "PhaseFlip : (n, q:qs) -> (q:qs')"
criterion: ECC
partitions:
  - variable: n
    classes:
      - {label: "n=1", values: [1]}
      - {label: "n>1", values: [5]}
  - variable: qs
    classes:
      - {label: "I", generator: "ket_x(n=5, x=0)"}
      - {label: "II", generator: "ket_x(n=5, x=13)"}
      - {label: "III", generator: "two_value(n=5, x=0, y=25)"}
      - {label: "IV", generator: "two_value(n=4, x=6, y=9)"}
cases:
  - name: "|0>"
    classes: ["n=1", "I"]
    inputs: {n: 1}
    quantum: {qs: "ket_x(n=1, x=0)"}
    expect: {qs: "state(ket_x(n=1, x=0))"}
    repetitions: 10
  - name: "|1>"
    classes: ["n=1", "II"]
    inputs: {n: 1}
    quantum: {qs: "ket_x(n=1, x=1)"}
    expect: {qs: "state(ket_x(n=1, x=1))"}
    repetitions: 10
  - name: "|+>"
    classes: ["n=1", "III"]
    inputs: {n: 1}
    quantum: {qs: "pauli(3)"}
    expect: {qs: "differs(pauli(3))"}
    repetitions: 10
  - name: "|00000>"
    classes: ["n>1", "I"]
    inputs: {n: 5}
    quantum: {qs: "ket_x(n=5, x=0)"}
    expect: {qs: "state(ket_x(n=5, x=0))"}
    repetitions: 10
  - name: "|01101>"
    classes: ["n>1", "II"]
    inputs: {n: 5}
    quantum: {qs: "ket_x(n=5, x=13)"}
    expect: {qs: "state(ket_x(n=5, x=13))"}
    repetitions: 10
  - name: "|00000>+|11001>"
    classes: ["n>1", "III"]
    inputs: {n: 5}
    quantum: {qs: "two_value(n=5, x=0, y=25)"}
    expect: {qs: "differs(two_value(n=5, x=0, y=25))"}
    repetitions: 10
  - name: "|0110>+|1001>"
    classes: ["n>1", "IV"]
    inputs: {n: 4}
    quantum: {qs: "two_value(n=4, x=6, y=9)"}
    expect: {qs: "state(two_value(n=4, x=6, y=9))"}
    repetitions: 10
)y"},
        {"Grover", R"y(subroutine: Grover
mark: "Grover : (n, sub:q:OracleK) -> (q:qs')"
cases:
  - name: "n=3,K=5"
    inputs: {n: 3}
    subroutines: {OracleK: PhaseOracle_3_5}
    expect: {qs: "freq(5, 0.85)"}
    repetitions: 100
  - name: "n=4,K=11"
    inputs: {n: 4}
    subroutines: {OracleK: PhaseOracle_4_11}
    expect: {qs: "freq(11, 0.85)"}
    repetitions: 100
)y"},
        {"QFT", R"y(subroutine: QFT
mark: "QFT : (n, q:qs) -> (q:qs'^BE)"
criterion: ACoC
partitions:
  - variable: n
    classes:
      - {label: "n=1", values: [1]}
      - {label: "n=2", values: [2]}
      - {label: "n>=3", values: [3]}
  - variable: qs
    classes:
      - {label: C, generator: "sample(kind=CI, n=3)"}
      - {label: S, generator: "sample(kind=CSI, n=3)"}
cases:
  - name: "n=1,C"
    classes: ["n=1", C]
    inputs: {n: 1}
    quantum: {qs: "ket_x(n=1, x=1)"}
    expect: {qs: "qft(j=1)"}
    repetitions: 20
  - name: "n=1,S"
    classes: ["n=1", S]
    inputs: {n: 1}
    quantum: {qs: "pauli(3)"}
    expect: {qs: "state(ket_x(n=1, x=0))"}
    repetitions: 20
  - name: "n=2,C"
    classes: ["n=2", C]
    inputs: {n: 2}
    quantum: {qs: "ket_x(n=2, x=2)"}
    expect: {qs: "qft(j=2)"}
    repetitions: 20
  - name: "n=2,S"
    classes: ["n=2", S]
    inputs: {n: 2}
    quantum: {qs: "comp_sup(n=2, x=1, theta=0)"}
    expect: {qs: "overlap(qft(j=1), 0.5)"}
    repetitions: 400
  - name: "n=3,C"
    classes: ["n>=3", C]
    inputs: {n: 3}
    quantum: {qs: "ket_x(n=3, x=5)"}
    expect: {qs: "qft(j=5)"}
    repetitions: 20
  - name: "n=3,S"
    classes: ["n>=3", S]
    inputs: {n: 3}
    quantum: {qs: "comp_sup(n=3, x=3, theta=0)"}
    expect: {qs: "overlap(qft(j=3), 0.5)"}
    repetitions: 400
)y"},
        {"QAdd", R"y(subroutine: QAdd
mark: "QAdd : (n, q:qs1, q:qs2) -> (q:qs1', q:qs2')"
partitions:
  - variable: qs2
    classes:
      - {label: "no overflow", generator: "ket_x(n=4, x=6)"}
      - {label: overflow, generator: "ket_x(n=4, x=9)"}
cases:
  - name: "3+6"
    classes: ["no overflow"]
    inputs: {n: 4}
    quantum: {qs1: "ket_x(n=4, x=3)", qs2: "ket_x(n=4, x=6)"}
    expect: {qs1: "3", qs2: "9"}
    repetitions: 10
  - name: "12+9"
    classes: [overflow]
    inputs: {n: 4}
    quantum: {qs1: "ket_x(n=4, x=12)", qs2: "ket_x(n=4, x=9)"}
    expect: {qs1: "12", qs2: "5"}
    repetitions: 10
)y"},
        {"Teleport", R"y(subroutine: Teleport
mark: "Teleport : (q:qsrc) -> (q:qdest')"
cases:
  - {name: "|0>", quantum: {qsrc: "pauli(1)"}, expect: {qdest: "state(pauli(1))"}, repetitions: 20}
  - {name: "|1>", quantum: {qsrc: "pauli(2)"}, expect: {qdest: "state(pauli(2))"}, repetitions: 20}
  - {name: "|+>", quantum: {qsrc: "pauli(3)"}, expect: {qdest: "state(pauli(3))"}, repetitions: 20}
  - {name: "|->", quantum: {qsrc: "pauli(4)"}, expect: {qdest: "state(pauli(4))"}, repetitions: 20}
  - {name: "|+i>", quantum: {qsrc: "pauli(5)"}, expect: {qdest: "state(pauli(5))"}, repetitions: 20}
  - {name: "|-i>", quantum: {qsrc: "pauli(6)"}, expect: {qdest: "state(pauli(6))"}, repetitions: 20}
)y"},
        {"QPE", R"y(subroutine: QPE
mark: "QPE : (Nclock, Ntarget, sub:q:Upower, q:target) -> (q:clock'^BE)"
criterion: ECC
partitions:
  - variable: Nclock
    classes:
      - {label: suf, values: [3]}
      - {label: ins, values: [7]}
  - variable: Ntarget
    classes:
      - {label: "=1", values: [1]}
      - {label: ">=2", values: [3]}
  - variable: target
    classes:
      - {label: es, generator: "pauli(4)"}
      - {label: nes, generator: "ket_x(n=1, x=0)"}
cases:
  - name: "X, |->"
    classes: [suf, "=1", es]
    inputs: {Nclock: 3, Ntarget: 1}
    subroutines: {Upower: XPower}
    quantum: {target: "pauli(4)"}
    expect: {clock: "4"}
    repetitions: 20
  - name: "H, |0>"
    classes: [suf, "=1", nes]
    inputs: {Nclock: 3, Ntarget: 1}
    subroutines: {Upower: HPower}
    quantum: {target: "ket_x(n=1, x=0)"}
    expect: {clock: "dist([0, 0.8535533905932737], [4, 0.14644660940672624])"}
    repetitions: 1000
  - name: "C(S Sdg), |101>"
    classes: [suf, ">=2", es]
    inputs: {Nclock: 3, Ntarget: 3}
    subroutines: {Upower: CSSdgPower}
    quantum: {target: "ket_x(n=3, x=5)"}
    expect: {clock: "6"}
    repetitions: 20
  - name: "C(S Sdg), |101>+|110>"
    classes: [suf, ">=2", nes]
    inputs: {Nclock: 3, Ntarget: 3}
    subroutines: {Upower: CSSdgPower}
    quantum: {target: "two_value(n=3, x=5, y=6)"}
    expect: {clock: "dist([6, 0.5], [2, 0.5])"}
    repetitions: 400
  - name: "C(Rz(2pi/3)), |10>"
    classes: [ins, ">=2", es]
    inputs: {Nclock: 7, Ntarget: 2}
    subroutines: {Upower: CRzPower}
    quantum: {target: "ket_x(n=2, x=2)"}
    expect: {clock: "freq(107, 0.5)"}
    repetitions: 200
)y"},
    };
    return s;
}

}  // namespace

std::string default_suite_yaml(const std::string& name) {
    auto it = suites().find(name);
    if (it == suites().end()) throw std::out_of_range("no default suite for " + name);
    return it->second;
}

}  // namespace qtk::bench
