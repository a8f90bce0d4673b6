#include "wvg/reference.hpp"

namespace wvg::reference {

namespace {

// Payoffs from 10^10 draws (SE about 4e-6), rounded to 4 decimals.
constexpr EcPayoffRow kPayoffs[] = {
    {3, 8, 0.0113, 0.0133, 0.0130, 0.0167},  {4, 5, 0.0151, 0.0177, 0.0174, 0.0209},
    {5, 3, 0.0189, 0.0221, 0.0217, 0.0251},  {6, 6, 0.0226, 0.0266, 0.0261, 0.0293},
    {7, 3, 0.0264, 0.0310, 0.0305, 0.0335},  {8, 2, 0.0302, 0.0354, 0.0348, 0.0377},
    {9, 3, 0.0340, 0.0399, 0.0392, 0.0419},  {10, 4, 0.0378, 0.0443, 0.0436, 0.0461},
    {11, 4, 0.0416, 0.0488, 0.0479, 0.0503}, {12, 1, 0.0454, 0.0532, 0.0523, 0.0545},
    {13, 1, 0.0492, 0.0577, 0.0567, 0.0587}, {14, 1, 0.0531, 0.0622, 0.0611, 0.0630},
    {15, 1, 0.0569, 0.0666, 0.0655, 0.0672}, {16, 2, 0.0607, 0.0711, 0.0699, 0.0715},
    {18, 1, 0.0684, 0.0801, 0.0788, 0.0800}, {20, 2, 0.0762, 0.0891, 0.0877, 0.0885},
    {29, 2, 0.1120, 0.1303, 0.1284, 0.1275}, {38, 1, 0.1494, 0.1729, 0.1706, 0.1677},
    {55, 1, 0.2356, 0.2614, 0.2615, 0.2507},
};

constexpr EcRatioRow kRatios[] = {
    {3, 8, 0.852, 0.982, 1.260, 1.479},  {4, 5, 0.852, 0.982, 1.182, 1.387},
    {5, 3, 0.852, 0.982, 1.134, 1.331},  {6, 6, 0.852, 0.982, 1.103, 1.294},
    {7, 3, 0.852, 0.982, 1.080, 1.268},  {8, 2, 0.852, 0.982, 1.064, 1.248},
    {9, 3, 0.852, 0.982, 1.050, 1.232},  {10, 4, 0.853, 0.983, 1.040, 1.220},
    {11, 4, 0.853, 0.983, 1.031, 1.210}, {12, 1, 0.853, 0.983, 1.024, 1.201},
    {13, 1, 0.853, 0.983, 1.018, 1.194}, {14, 1, 0.853, 0.983, 1.013, 1.187},
    {15, 1, 0.854, 0.983, 1.009, 1.181}, {16, 2, 0.854, 0.983, 1.005, 1.177},
    {18, 1, 0.854, 0.983, 0.998, 1.168}, {20, 2, 0.855, 0.983, 0.993, 1.161},
    {29, 2, 0.859, 0.985, 0.978, 1.138}, {38, 1, 0.864, 0.987, 0.970, 1.122},
    {55, 1, 0.901, 1.000, 0.959, 1.064},
};

constexpr Example1Row kExample1[] = {
    {"Florida", 0.250, 0.332, 0.343, 0.271},
    {"New York", 0.250, 0.332, 0.323, 0.271},
    {"Wyoming", 0.250, 0.034, 0.008, 0.271},
    {"Per capita average", 0.250, 0.328, 0.329, 0.271},
};

} // namespace

std::span<const EcPayoffRow> ec_payoffs() { return kPayoffs; }
std::span<const EcRatioRow> ec_ratios() { return kRatios; }
std::span<const Example1Row> example1() { return kExample1; }

} // namespace wvg::reference
