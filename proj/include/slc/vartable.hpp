#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "slc/rational.hpp"

namespace slc {

/// Ordered variable table of a supercommutative polynomial ring.
/// The declared order is canonical: it fixes every Koszul sign in the
/// system. Global variable ids enumerate the even variables first, then
/// the odd ones.
class VarTable {
public:
    VarTable(std::vector<std::string> even_vars, std::vector<std::string> odd_vars)
        : even_(std::move(even_vars)), odd_(std::move(odd_vars)) {
        if (odd_.size() > 64) throw Error("more than 64 odd variables");
        int id = 0;
        for (const auto& v : even_) register_name(v, id++);
        for (const auto& v : odd_) register_name(v, id++);
    }

    static std::shared_ptr<const VarTable> make(std::vector<std::string> even_vars,
                                                std::vector<std::string> odd_vars) {
        return std::make_shared<const VarTable>(std::move(even_vars), std::move(odd_vars));
    }

    size_t even_count() const { return even_.size(); }
    size_t odd_count() const { return odd_.size(); }
    size_t size() const { return even_.size() + odd_.size(); }

    bool is_odd(int id) const { return id >= static_cast<int>(even_.size()); }
    int parity(int id) const { return is_odd(id) ? 1 : 0; }

    /// Bit position of an odd variable inside monomial masks.
    int odd_bit(int id) const {
        if (!is_odd(id)) throw Error("odd_bit of even variable");
        return id - static_cast<int>(even_.size());
    }
    int odd_bit_to_id(int bit) const { return bit + static_cast<int>(even_.size()); }

    const std::string& name(int id) const {
        if (id < 0 || id >= static_cast<int>(size())) throw Error("variable id out of range");
        if (id < static_cast<int>(even_.size())) return even_[static_cast<size_t>(id)];
        return odd_[static_cast<size_t>(id) - even_.size()];
    }

    int id_of(const std::string& nm) const {
        auto it = by_name_.find(nm);
        if (it == by_name_.end()) throw Error("unknown variable: " + nm);
        return it->second;
    }
    bool has(const std::string& nm) const { return by_name_.count(nm) != 0; }

    const std::vector<std::string>& even_vars() const { return even_; }
    const std::vector<std::string>& odd_vars() const { return odd_; }

    bool operator==(const VarTable& other) const {
        return even_ == other.even_ && odd_ == other.odd_;
    }
    bool operator!=(const VarTable& other) const { return !(*this == other); }

private:
    void register_name(const std::string& v, int id) {
        if (v.empty()) throw Error("empty variable name");
        if (!by_name_.emplace(v, id).second) throw Error("duplicate variable name: " + v);
    }

    std::vector<std::string> even_;
    std::vector<std::string> odd_;
    std::map<std::string, int> by_name_;
};

using TablePtr = std::shared_ptr<const VarTable>;

inline bool same_table(const TablePtr& a, const TablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline void require_same_table(const TablePtr& a, const TablePtr& b, const char* what) {
    if (!same_table(a, b)) throw Error(std::string("incompatible variable tables in ") + what);
}

}  // namespace slc
