#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "hydrocas/app.hpp"

using namespace hydrocas::app;

namespace
{
std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

std::string hash_of(const std::string &csv)
{
    const auto first = lines(csv).at(0);
    const auto p = first.find("config_hash=");
    return first.substr(p + 12, 16);
}

RunConfig small()
{
    RunConfig c;
    c.n_d = 2;
    c.n_k = 4;
    c.n_w = 4;
    c.n_z = 10;
    return c;
}
} // namespace

TEST(App, MaterialInfoForGold)
{
    const auto out = run("material-info", RunConfig{});
    ASSERT_EQ(out.status, exit_ok);
    const auto l = lines(out.csv);
    EXPECT_EQ(l.at(0).rfind("# hydrocas 1.0.0 command=material-info config_hash=", 0), 0u);
    EXPECT_NE(l.at(0).find("status=ok"), std::string::npos);
    EXPECT_EQ(l.at(1), "quantity,value,unit");
    bool ell = false, lp = false;
    for (const auto &row : l)
    {
        if (row.rfind("ell,", 0) == 0)
            ell = std::abs(std::stod(row.substr(4)) - 34.0) < 0.5;
        if (row.rfind("lambda_p_red,", 0) == 0)
            lp = std::abs(std::stod(row.substr(13)) - 22.0) < 0.5;
    }
    EXPECT_TRUE(ell);
    EXPECT_TRUE(lp);
}

TEST(App, CsvHeaders)
{
    const std::vector<std::pair<std::string, std::string>> expect{
        {"viscosity-scan", "omega_tau,q_ell,re_eta_over_vF2tau,beta_T_sq_over_vF2,model_tag"},
        {"reflection-scan", "k_over_lambda_p_inv,k_per_m,omega_tau,omega_eV,model,pol,re_r,im_r,abs_r2"},
        {"profile", "z_nm,re_v,im_v,re_v_loc,im_v_loc,re_A,im_A"},
        {"pressure-scan", "d_nm,model,P_thermal_Pa,P_evan,P_prop,err"},
        {"heat-scan", "d_nm,model,h_W_m2K,err"},
        {"map", "k_over_lambda_p_inv,omega_tau,value_normalized"},
        {"validate", "check,value,target,tolerance,result"},
    };
    for (const auto &[cmd, header] : expect)
    {
        const auto out = run(cmd, small());
        ASSERT_EQ(out.status, exit_ok) << cmd << ": " << out.message;
        bool found = false;
        for (const auto &l : lines(out.csv))
        {
            if (!l.empty() && l[0] == '#')
                continue;
            found = l == header;
            break;
        }
        EXPECT_TRUE(found) << cmd;
        EXPECT_EQ(lines(out.csv).at(0).rfind("# hydrocas " + std::string(kVersion) + " command=" + cmd, 0), 0u);
    }
}

TEST(App, RowCounts)
{
    auto c = small();
    c.models = {"local", "hydro"};
    const auto r = lines(run("reflection-scan", c).csv);
    EXPECT_EQ(r.size(), 2u + 4 * 4 * 2);
    const auto p = lines(run("pressure-scan", c).csv);
    EXPECT_EQ(p.size(), 2u + 2 * 2);
    const auto m = lines(run("map", small()).csv);
    std::size_t data = 0;
    for (const auto &l : m)
        data += (!l.empty() && l[0] != '#');
    EXPECT_EQ(data, 1u + 16);
}

TEST(App, ValidatePasses)
{
    const auto out = run("validate", RunConfig{});
    ASSERT_EQ(out.status, exit_ok) << out.message;
    for (const auto &l : lines(out.csv))
        if (!l.empty() && l[0] != '#' && l.rfind("check,", 0) != 0)
            EXPECT_EQ(l.substr(l.rfind(',') + 1), "pass") << l;
}

TEST(App, ConfigErrors)
{
    RunConfig c = small();
    c.models = {"hydro"};
    c.pol = "p";
    EXPECT_EQ(run("pressure-scan", c).status, exit_config);
    c.pol = "both";
    EXPECT_EQ(run("reflection-scan", c).status, exit_config);

    auto bad = [](auto mutate) {
        RunConfig c = small();
        mutate(c);
        return run("pressure-scan", c);
    };
    EXPECT_EQ(bad([](RunConfig &c) { c.models = {"drude"}; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.models = {}; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.pol = "x"; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.T = -1.0; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.d_max_nm = 10.0; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.n_k = 1; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.threads = 0; }).status, exit_config);
    EXPECT_EQ(bad([](RunConfig &c) { c.material_path = "/nonexistent/gold.cfg"; }).status, exit_config);
    const auto unknown = run("plot", small());
    EXPECT_EQ(unknown.status, exit_config);
    EXPECT_FALSE(unknown.message.empty());
    EXPECT_TRUE(unknown.csv.empty());
}

TEST(App, HashTracksInputsButNotThreads)
{
    RunConfig a = small();
    RunConfig b = a;
    b.threads = 7;
    b.output = "/tmp/elsewhere.csv";
    const auto ha = hash_of(run("material-info", a).csv);
    EXPECT_EQ(ha, hash_of(run("material-info", b).csv));
    b.T = 301.0;
    EXPECT_NE(ha, hash_of(run("material-info", b).csv));
    // the shipped gold file describes the same material as the preset
    RunConfig f = a;
    f.material_path = HYDROCAS_DATA_DIR "/gold.cfg";
    EXPECT_EQ(ha, hash_of(run("material-info", f).csv));
}

TEST(App, PressureScanBitIdenticalAcrossThreads)
{
    RunConfig c = small();
    c.models = {"local", "hydro", "surfcond"};
    c.n_d = 3;
    const auto ref = run("pressure-scan", c);
    ASSERT_EQ(ref.status, exit_ok);
    for (unsigned t : {4u, 8u})
    {
        c.threads = t;
        EXPECT_EQ(run("pressure-scan", c).csv, ref.csv) << t;
    }
}

TEST(App, ProfileCarriesSurfaceSummary)
{
    const auto out = run("profile", small());
    ASSERT_EQ(out.status, exit_ok);
    EXPECT_NE(out.csv.find("j_excess"), std::string::npos);
    EXPECT_EQ(lines(out.csv).size(), 3u + 11);
}

TEST(App, NumericalFailureFlagsPartialOutput)
{
    RunConfig c;
    c.n_d = 1;
    c.rel_tol = 1e-15; // below the roundoff floor of the quadrature
    c.threads = 8;
    const auto out = run("heat-scan", c);
    EXPECT_EQ(out.status, exit_numerical);
    EXPECT_NE(lines(out.csv).at(0).find("status=partial"), std::string::npos);
    EXPECT_NE(out.message.find("partial"), std::string::npos);
}
