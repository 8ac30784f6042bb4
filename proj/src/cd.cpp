#include "tensor1/cd.hpp"

#include <array>

#include "tensor1/xml.hpp"

namespace tensor1 {

namespace {

struct CdEntry {
    const char* name;
    const char* role;
    const char* description;
};

// Order matters: this is the documented dictionary order.
constexpr std::array<CdEntry, 11> kEntries = {{
    {"tuple", "application",
     "An n-ary operator returning the ordered n-tuple of its arguments. Coordinate tuples "
     "are plain tuples, not vectors: tuple addition has no invariant meaning under general "
     "coordinate transformations."},
    {"tuple_selector", "application",
     "Takes an n-tuple and a natural number i with 1 <= i <= n and returns the i-th "
     "element of the tuple."},
    {"Cartesian", "application",
     "Takes a natural number i and returns the i-th coordinate of a right-handed "
     "Cartesian frame. Coordinate transformations are defined as functions of these "
     "coordinates."},
    {"unit_Cartesian", "application",
     "Takes a natural number i and returns the i-th orthonormal basis vector of the "
     "right-handed Cartesian frame."},
    {"Kronecker_tensor", "constant",
     "The mixed-variance identity tensor with components equal to one when the two "
     "indexes coincide and zero otherwise. Its components are the same in every frame."},
    {"basis_selector", "application",
     "Takes an ordered basis and an indexing application. For covar_index(i) it returns "
     "the i-th basis vector; for contra_index(i) it returns the i-th covector of the "
     "dual basis."},
    {"tensor_selector", "application",
     "Takes a tensor, a tuple of contra_index/covar_index applications whose length "
     "equals the tensor's order, and a frame, and returns the selected scalar component. "
     "Components are stored in row-major order: the rightmost index varies fastest. The "
     "frame may be a named frame, an ordered basis, or the value unspecified when the "
     "expression does not depend on a basis."},
    {"contra_index", "application",
     "Takes a natural number and marks that index position as contravariant: the "
     "component transforms with the inverse Jacobian of the coordinate change."},
    {"covar_index", "application",
     "Takes a natural number and marks that index position as covariant: the component "
     "transforms with the Jacobian of the coordinate change, as basis vectors do."},
    {"metric_tensor", "constant",
     "The symmetric, non-degenerate, covariant bilinear form that defines lengths: the "
     "squared line element is the metric contracted with coordinate differentials, and "
     "index raising/lowering contracts with it or its inverse."},
    {"Levi-Civita", "application",
     "Takes the dimension n of the space and returns the order-n totally antisymmetric "
     "permutation symbol: the sign of the index permutation, zero when any index "
     "repeats."},
}};

}  // namespace

std::string emit_tensor1_cd() {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<CD xmlns=\"http://www.openmath.org/OpenMathCD\">\n";
    out += "  <CDName>tensor1</CDName>\n";
    out += "  <CDBase>http://www.openmath.org/cd</CDBase>\n";
    out += "  <CDURL>http://www.openmath.org/cd/tensor1.ocd</CDURL>\n";
    out += "  <CDDate>2026-08-09</CDDate>\n";
    out += "  <CDVersion>1</CDVersion>\n";
    out += "  <CDRevision>0</CDRevision>\n";
    out += "  <CDStatus>experimental</CDStatus>\n";
    out += "  <Description>\n";
    out +=
        "    Symbols for tensor formulas: coordinate tuples, Cartesian frames, frames\n"
        "    derived from differentiable coordinate transformations, contravariant and\n"
        "    covariant component selection, the Kronecker and metric tensors, and the\n"
        "    permutation symbol.\n";
    out += "  </Description>\n";
    for (const CdEntry& e : kEntries) {
        out += "  <CDDefinition>\n";
        out += std::string("    <Name>") + e.name + "</Name>\n";
        out += std::string("    <Role>") + e.role + "</Role>\n";
        out += "    <Description>" + xml::escape_text(e.description) + "</Description>\n";
        out += "  </CDDefinition>\n";
    }
    out += "</CD>\n";
    return out;
}

}  // namespace tensor1
