"""Minimal c_h = exp(-b_h r_e) for the built-in molecules, next to the printed values."""
from tietz_spectra.moldb import builtin_molecules, printed_c_h_min


def main():
    printed = printed_c_h_min()
    print(f"{'molecule':<18}{'b_h':>10}{'r_e':>8}{'computed':>15}{'printed':>15}{'rel dev':>11}")
    for m in builtin_molecules():
        dev = abs(m.c_h_min - printed[m.name]) / printed[m.name]
        print(f"{m.name:<18}{m.b_h:>10.6f}{m.r_e:>8.3f}{m.c_h_min:>15.9f}{printed[m.name]:>15.9f}{dev:>11.1e}")


if __name__ == "__main__":
    main()
