"""Case3 levels approach the Morse levels as c_h -> 0-."""
from tietz_spectra.model import PotentialParams
from tietz_spectra.spectra import morse_levels, transcendental_case3_levels


def main(D=25.0, r_e=4.0, b_h=1.0):
    base = PotentialParams.natural(D=D, r_e=r_e, b_h=b_h, c_h=0.0)
    morse = [x.energy for x in morse_levels(base)]
    print("Morse:", " ".join(f"{e:.8f}" for e in morse))
    for c in (-0.1, -0.03, -1e-2, -3e-3, -1e-3):
        roots = [x.energy for x in transcendental_case3_levels(base.with_c_h(c))]
        if len(roots) != len(morse):
            print(f"c_h = {c:g}: {len(roots)} levels vs {len(morse)}")
            continue
        dev = max(abs(a - b) for a, b in zip(roots, morse)) / D
        print(f"c_h = {c:<7g} max |E - E_Morse| / D = {dev:.3e}")


if __name__ == "__main__":
    main()
