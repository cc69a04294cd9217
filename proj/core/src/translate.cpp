#include "vker/translate.hpp"

#include <cassert>
#include <stdexcept>

namespace vker {

namespace {

struct Builder {
  Translation out;
  int counter = 0;

  NodeId fresh(NodeType ty) {
    // '#' cannot appear in identifiers, so these never collide with variables
    NodeId id = std::string(ty == NodeType::E ? "#e" : "#m") + std::to_string(counter++);
    out.net.nodes[id] = ty;
    return id;
  }

  NodeId named_e(const NodeId& name) {
    out.net.nodes[name] = NodeType::E;
    return name;
  }

  LinkId link(LinkKind kind, std::vector<NodeId> sources, std::vector<NodeId> targets,
              std::set<LinkId>& collected) {
    LinkId id = out.net.add_link({kind, std::move(sources), std::move(targets)});
    collected.insert(id);
    return id;
  }

  // Par-link with its box for an abstraction \x.body; `a` is the m-source.
  LinkId make_par(const NodeId& a, const std::string& binder, const Term& body, Path& path,
                  std::set<LinkId>& collected) {
    std::set<LinkId> interior;
    path.push_back(0);
    NodeId body_root = go(body, path, interior, std::nullopt);
    path.pop_back();
    if (!fv(body).count(binder)) {
      // unused binder: the box carries a weakening on its variable
      link(LinkKind::Weak, {}, {named_e(binder)}, interior);
    }
    LinkId par = link(LinkKind::Par, {a}, {body_root, named_e(binder)}, collected);
    out.net.boxes.emplace(par, ParBox{interior, binder});
    collected.insert(interior.begin(), interior.end());
    return par;
  }

  // Translates t, creating a fresh root unless a name is imposed (the root of
  // a substitution's definition is the substituted variable itself).
  NodeId go(const Term& t, Path& path, std::set<LinkId>& collected,
            std::optional<NodeId> root_name) {
    switch (t->kind) {
      case TermKind::Var: {
        NodeId r = root_name ? named_e(*root_name) : fresh(NodeType::E);
        NodeId a = fresh(NodeType::M);
        link(LinkKind::Bang, {r}, {a}, collected);
        link(LinkKind::Der, {a}, {named_e(t->name)}, collected);
        return r;
      }
      case TermKind::Abs: {
        NodeId r = root_name ? named_e(*root_name) : fresh(NodeType::E);
        NodeId a = fresh(NodeType::M);
        link(LinkKind::Bang, {r}, {a}, collected);
        make_par(a, t->name, t->left, path, collected);
        return r;
      }
      case TermKind::App: {
        NodeId a = fresh(NodeType::M);
        if (t->left->kind == TermKind::Var) {
          link(LinkKind::Der, {a}, {named_e(t->left->name)}, collected);
        } else {
          assert(t->left->kind == TermKind::Abs);
          path.push_back(0);
          make_par(a, t->left->name, t->left->left, path, collected);
          path.pop_back();
          out.m_cuts[path] = a;
        }
        path.push_back(1);
        NodeId arg_root = go(t->right, path, collected, std::nullopt);
        path.pop_back();
        NodeId r = root_name ? named_e(*root_name) : fresh(NodeType::E);
        link(LinkKind::Tensor, {r}, {a, arg_root}, collected);
        return r;
      }
      case TermKind::Sub: {
        path.push_back(0);
        NodeId r = go(t->left, path, collected, root_name);
        path.pop_back();
        if (!fv(t->left).count(t->name)) {
          // vacuous substitution: the variable's fan-in is a weakening
          link(LinkKind::Weak, {}, {named_e(t->name)}, collected);
        }
        path.push_back(1);
        go(t->right, path, collected, named_e(t->name));
        path.pop_back();
        // the cut node exists; it fires only when the definition is a value
        // under a telescope, which is exactly when the e-redex exists
        {
          const TermNode* core = t->right.get();
          while (core->kind == TermKind::Sub) core = core->left.get();
          if (core->kind == TermKind::Var || core->kind == TermKind::Abs)
            out.e_cuts[path] = t->name;
        }
        return r;
      }
    }
    throw std::logic_error("unreachable term kind");
  }
};

}  // namespace

Translation translate_full(const Term& t, const std::set<std::string>& weakenings) {
  if (!is_well_named(t))
    throw TermError("translate requires a well-named term: " + show(t));
  if (!is_kernel(t)) throw IteratedApplication("translate requires a kernel term: " + show(t));
  Builder b;
  Path path;
  std::set<LinkId> collected;
  b.out.net.root = b.go(t, path, collected, std::nullopt);
  std::set<std::string> free = fv(t);
  for (const auto& y : weakenings) {
    if (free.count(y)) continue;  // refinement: X members already free are dropped
    std::set<LinkId> dummy;
    b.link(LinkKind::Weak, {}, {b.named_e(y)}, dummy);
  }
  b.out.net.free_vars = b.out.net.compute_free_vars();
  return std::move(b.out);
}

Net translate(const Term& t, const std::set<std::string>& weakenings) {
  return translate_full(t, weakenings).net;
}

}  // namespace vker
