#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hydrocas/app.hpp"

int main(int argc, char **argv)
{
    using namespace hydrocas::app;
    RunConfig c;
    if (const char *env = std::getenv("HYDROCAS_THREADS"))
    {
        try
        {
            c.threads = static_cast<unsigned>(std::stoul(env));
        }
        catch (const std::exception &)
        {
            std::cerr << "HYDROCAS_THREADS is not a number: " << env << '\n';
            return exit_config;
        }
    }

    CLI::App app{"Reflection amplitudes, thermal Casimir pressure and radiative heat transfer for metal plates"};
    std::string command;
    app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(command_names()));
    app.add_option("--material", c.material_path, "Material file (key = value); default: gold preset");
    app.add_option("--model", c.models, "Reflection model(s): local, hydro, surfcond, ideal")->delimiter(',');
    app.add_option("--pol", c.pol, "Polarization: s, p or both");
    app.add_option("--T", c.T, "Temperature (K)");
    app.add_option("--T1", c.T1, "Temperature of plate 1 (K)");
    app.add_option("--T2", c.T2, "Temperature of plate 2 (K)");
    app.add_option("--d-min", c.d_min_nm, "Smallest gap (nm); the map uses this gap");
    app.add_option("--d-max", c.d_max_nm, "Largest gap (nm)");
    app.add_option("--n-d", c.n_d, "Number of log-spaced gaps");
    app.add_option("--k-min", c.k_min, "Smallest k (1/lambda_p)");
    app.add_option("--k-max", c.k_max, "Largest k (1/lambda_p)");
    app.add_option("--n-k", c.n_k, "Number of k samples");
    app.add_option("--omega-min", c.w_min, "Smallest omega (1/tau)");
    app.add_option("--omega-max", c.w_max, "Largest omega (1/tau)");
    app.add_option("--n-omega", c.n_w, "Number of omega samples");
    app.add_option("--ell0", c.ell0, "Surface length ell_0 (units of ell)");
    app.add_option("--tau-s", c.tau_s, "Surface relaxation time (units of tau)");
    app.add_option("--q-ell", c.q_ell, "Wavenumbers q ell for viscosity-scan")->delimiter(',');
    app.add_option("--profile-k", c.profile_k, "Profile in-plane k (1/lambda_p)");
    app.add_option("--profile-omega", c.profile_w, "Profile frequency (1/tau)");
    app.add_option("--z-max", c.z_max_nm, "Profile depth (nm); 0 selects ten mean free paths");
    app.add_option("--n-z", c.n_z, "Profile samples");
    app.add_option("--quantity", c.quantity, "Map quantity: pressure or heat");
    app.add_option("--rel-tol", c.rel_tol, "Relative quadrature tolerance");
    app.add_option("--omega-max-factor", c.omega_max_factor, "Frequency cutoff in units of k_B T / hbar");
    app.add_option("--kappa-max-factor", c.kappa_max_factor, "Decay-constant cutoff in units of 1/d");
    app.add_option("--threads", c.threads, "Worker threads (default: HYDROCAS_THREADS or 1)");
    app.add_option("-o,--output", c.output, "Output CSV path, '-' for stdout");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    const auto out = run(command, c);
    if (!out.csv.empty())
    {
        if (c.output == "-")
            std::cout << out.csv;
        else
        {
            std::ofstream f(c.output, std::ios::binary);
            if (!f)
            {
                std::cerr << "cannot write " << c.output << '\n';
                return exit_config;
            }
            f << out.csv;
        }
    }
    if (!out.message.empty())
        (out.status == exit_ok ? std::clog : std::cerr) << out.message << '\n';
    return out.status;
}
