#pragma once

#include <memory>
#include <type_traits>
#include <utility>

namespace wmit {

template <class Sig>
class FunctionRef;

/// Non-owning view of a callable. The referenced callable must outlive the view;
/// used for integrands so nested quadrature does not allocate.
template <class R, class... Args>
class FunctionRef<R(Args...)> {
  public:
    template <class F>
        requires(!std::is_same_v<std::remove_cvref_t<F>, FunctionRef> &&
                 std::is_invocable_r_v<R, F&, Args...>)
    FunctionRef(F&& f) noexcept  // NOLINT(google-explicit-constructor)
        : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
          call_([](void* o, Args... args) -> R {
              return (*static_cast<std::add_pointer_t<std::remove_reference_t<F>>>(o))(
                  std::forward<Args>(args)...);
          }) {}

    R operator()(Args... args) const { return call_(obj_, std::forward<Args>(args)...); }

  private:
    void* obj_;
    R (*call_)(void*, Args...);
};

}  // namespace wmit
