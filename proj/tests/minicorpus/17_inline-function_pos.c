static inline int f(int x)
{
    return x;
}
